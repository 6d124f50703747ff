#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fflab/harmonics.hpp"
#include "fflab/poly.hpp"

namespace fflab {

/// Subset of G^d as sorted, distinct linear point indices.
using IndexSet = std::vector<std::size_t>;

/// Throws PointOutsideCarrier for points outside G^d.
IndexSet make_index_set(const GroupSpec& spec, std::span<const Point> points);
/// Sorts, removes duplicates and range-checks raw indices.
IndexSet make_index_set(const GroupSpec& spec, std::vector<std::size_t> indices);

/// |{(x, y) in X x Y : x (.) y in P}| by direct enumeration.
std::uint64_t count_incidences(const GroupSpec& spec, std::span<const std::size_t> x, std::span<const std::size_t> y,
                               std::span<const std::size_t> p);

enum class Pivot { X, Y, P };

struct IncidenceReport {
  std::uint64_t count = 0;
  double main_term = 0.0;    // |X||Y||P| / |G^d|
  double pivot_norm = 0.0;   // ||pivot||_u
  double error_bound = 0.0;  // ||pivot||_u sqrt(product of the other two sizes) |G^d|
  double deviation = 0.0;    // |count - main_term|
  bool pass = false;
};

inline constexpr double kBoundSlack = 1e-6;

IncidenceReport incidence_bound_check(const GroupSpec& spec, std::span<const std::size_t> x,
                                      std::span<const std::size_t> y, std::span<const std::size_t> p, Pivot pivot);
/// Same check with a precomputed uniformity norm of the pivot set.
IncidenceReport incidence_bound_check(const GroupSpec& spec, std::span<const std::size_t> x,
                                      std::span<const std::size_t> y, std::span<const std::size_t> p, Pivot pivot,
                                      double pivot_norm);

/// ||1_F||_u |G^d| / sqrt|F|, the least C for which F is Salem with constant C.
/// Throws EmptySet.
double salem_constant(const GroupSpec& spec, std::span<const std::size_t> set);

enum class SalemCase { One = 1, Two = 2, Three = 3 };

struct SalemHypotheses {
  bool degree_order = false;       // case 1: 1 <= deg f < deg g
  bool m_below_p = false;          // deg f + deg g < p
  bool gcd_condition = false;      // case 2: gcd(deg g, q - 1) = 1 and deg f >= 1
  bool f_private_factors = false;  // case 3: factors of f absent from g with exponent gcd 1
  bool g_private_factors = false;  // case 3: and vice versa
};

struct SalemCertificate {
  SalemCase salem_case = SalemCase::One;
  GroupSpec spec;
  IndexSet points;                 // F = {(f(x), g(x))}
  std::size_t excluded = 0;        // x dropped because f(x) or g(x) left the carrier
  unsigned m = 0;                  // deg f + deg g
  double uniformity = 0.0;
  double measured_constant = 0.0;  // uniformity |G^2| / sqrt|F|
  SalemHypotheses hypotheses;
};

/// Builds F = {(f(x), g(x))} for the chosen case and measures its Salem
/// constant. Throws HypothesisViolated naming the failed clause, or
/// FactoredFormRequired for case 3 without factorizations.
SalemCertificate build_graph_set(const FieldPtr& field, const PolyUni& f, const PolyUni& g, SalemCase salem_case);

enum class WeilVariant { Additive, Mixed, Multiplicative };

struct WeilReport {
  Complex sum;
  double sum_magnitude = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// Direct evaluation of sum_x chi_b(f(x)) [additive], sum_x chi_b(f(x)) psi_j(g(x))
/// [mixed] or sum_x psi_j(g(x)) [multiplicative] against the Weil bounds.
/// The additive hypothesis gcd(deg f, q) = 1 is read as p not dividing deg f.
WeilReport weil_check(const FieldCtx& field, WeilVariant variant, const PolyUni& f, const PolyUni& g, Elem b,
                      std::uint32_t j);

struct KatzReport {
  int degree = 0;
  std::size_t level_set_size = 0;
  double bias = 0.0;
  double ratio = 0.0;  // bias q^{3/2} / k^2
  bool has_linear_factor = false;
};

/// Fourier bias of {(x, y) in F_q^2 : P(x, y) = a}.
KatzReport katz_ratio(const FieldPtr& field, const PolyBi& poly, Elem a);

struct ZeroCountReport {
  std::uint64_t zeros = 0;
  std::uint64_t bound = 0;  // k q^{n-1}
  int degree = 0;
  bool pass = false;
};

/// Exhaustive zero count against the Schwarz-Zippel bound. Throws ZeroPolynomial.
ZeroCountReport zero_count_check(const FieldCtx& field, const PolyUni& f);
ZeroCountReport zero_count_check(const FieldCtx& field, const PolyBi& f);

struct PrecursorReport {
  double lhs = 0.0;           // |X||Y|
  std::uint64_t middle = 0;   // |{(x, y) in X~ x Y : x (.) y in X (.) Y}|
  double rhs = 0.0;           // |X~||Y||P|/|G^d| + C sqrt(|X~||Y||P|)
  std::size_t product_size = 0;
  double salem_constant = 0.0;
  bool pass = false;
};

/// Exact chain |X||Y| <= incidences <= main + C sqrt(...) with P = X (.) Y and
/// C the measured Salem constant of X~. Throws NotSubset.
PrecursorReport theorem22_precursor(const GroupSpec& spec, std::span<const std::size_t> x,
                                    std::span<const std::size_t> xtilde, std::span<const std::size_t> y);

/// X (.) Y as an index set.
IndexSet product_set(const GroupSpec& spec, std::span<const std::size_t> x, std::span<const std::size_t> y);

}  // namespace fflab
