#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fflab/field.hpp"

namespace fflab {

using Complex = std::complex<double>;

enum class AxisKind { Additive, Multiplicative };

/// A point of G^d: one field element per axis (nonzero on multiplicative axes).
using Point = std::vector<Elem>;

/// G^d = G_1 x ... x G_d with each G_i either (F_q, +) or (F_q^*, x).
///
/// Points are stored by a row-major linear index. The coordinate of an
/// additive axis is the element's canonical index; the coordinate of a
/// multiplicative axis is its discrete log, so every axis is a cyclic or
/// elementary abelian group acting on coordinates.
class GroupSpec {
 public:
  GroupSpec(FieldPtr field, std::vector<AxisKind> axes);

  const FieldCtx& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  std::size_t dim() const { return axes_.size(); }
  AxisKind axis(std::size_t i) const { return axes_[i]; }
  const std::vector<AxisKind>& axes() const { return axes_; }
  std::size_t axis_size(std::size_t i) const { return sizes_[i]; }
  std::size_t size() const { return total_; }

  /// Throws PointOutsideCarrier for a wrong arity, an out-of-range element
  /// or zero on a multiplicative axis.
  std::size_t index_of(std::span<const Elem> point) const;
  Point point_at(std::size_t index) const;
  bool contains(std::span<const Elem> point) const;

  std::size_t identity() const;
  /// a (.) b
  std::size_t combine(std::size_t a, std::size_t b) const;
  std::size_t inverse(std::size_t a) const;

  bool operator==(const GroupSpec& o) const;

 private:
  std::uint32_t combine_coord(std::size_t axis, std::uint32_t a, std::uint32_t b) const;
  std::uint32_t inverse_coord(std::size_t axis, std::uint32_t a) const;

  FieldPtr field_;
  std::vector<AxisKind> axes_;
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

/// Character label per axis: b in F_q (canonical index) for an additive axis,
/// with chi_b(c) = exp(2 pi i Tr(bc)/p); j in Z_{q-1} for a multiplicative
/// axis, with psi_j(g^m) = exp(2 pi i jm/(q-1)). All zeros is the trivial character.
struct CharIndex {
  std::vector<std::uint32_t> labels;
  bool is_trivial() const;
  bool operator==(const CharIndex&) const = default;
};

std::size_t char_linear_index(const GroupSpec& spec, const CharIndex& chi);
CharIndex char_at(const GroupSpec& spec, std::size_t index);
/// Componentwise inverse label (-b, or -j mod q-1).
CharIndex inverse_char(const GroupSpec& spec, const CharIndex& chi);
/// chi(x) for a point given by linear index.
Complex character_value(const GroupSpec& spec, const CharIndex& chi, std::size_t point_index);

struct DenseFn {
  GroupSpec spec;
  std::vector<Complex> values;

  /// All-zero function.
  explicit DenseFn(GroupSpec s);
  DenseFn(GroupSpec s, std::vector<Complex> v);
};

struct Spectrum {
  GroupSpec spec;
  std::vector<Complex> coeffs;

  explicit Spectrum(GroupSpec s);
  Spectrum(GroupSpec s, std::vector<Complex> c);

  Complex at(const CharIndex& chi) const { return coeffs[char_linear_index(spec, chi)]; }
};

DenseFn indicator(const GroupSpec& spec, std::span<const Point> points);
DenseFn indicator_of_indices(const GroupSpec& spec, std::span<const std::size_t> indices);

/// f^(chi) = |G|^-1 sum_x f(x) conj(chi(x)), computed axis by axis.
Spectrum fourier_forward(const DenseFn& f);
/// f(x) = sum_chi chi(x) f^(chi).
DenseFn fourier_inverse(const Spectrum& s);

/// (f * g)(x) = sum_y f(y) g(x (.) y^-1), through the spectra.
DenseFn convolve(const DenseFn& f, const DenseFn& g);
/// Quadratic-time reference evaluation of the same sum.
DenseFn convolve_direct(const DenseFn& f, const DenseFn& g);

/// |sum_x f(x) conj(g(x)) - |G| sum_chi f^(chi) conj(g^(chi))|
double plancherel_check(const DenseFn& f, const DenseFn& g);

struct UniformityNorm {
  double value = 0.0;
  CharIndex argmax;
};

/// max over nontrivial characters of |f^(chi)|; the first maximiser in
/// canonical order is reported.
UniformityNorm uniformity_norm(const Spectrum& s);
UniformityNorm uniformity_norm(const DenseFn& f);

}  // namespace fflab

namespace fflab {

/// chi_b(c) = exp(2 pi i Tr(bc)/p) on F_q.
Complex additive_character(const FieldCtx& f, Elem b, Elem c);
/// psi_j(x) = exp(2 pi i j dlog(x)/(q-1)), with psi_j(0) = 0.
Complex multiplicative_character(const FieldCtx& f, std::uint32_t j, Elem x);

}  // namespace fflab
