#include "fflab/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fflab/kernels.hpp"

namespace fflab {

GroupSpec::GroupSpec(FieldPtr field, std::vector<AxisKind> axes) : field_(std::move(field)), axes_(std::move(axes)) {
  if (!field_) throw Error(ErrorCode::PreconditionViolated, "group spec without a field");
  if (axes_.empty()) throw Error(ErrorCode::PreconditionViolated, "group spec needs at least one axis");
  sizes_.resize(axes_.size());
  strides_.resize(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    sizes_[i] = axes_[i] == AxisKind::Additive ? field_->q() : field_->q() - 1;
  }
  for (std::size_t i = axes_.size(); i-- > 0;) {
    strides_[i] = total_;
    total_ *= sizes_[i];
  }
}

bool GroupSpec::contains(std::span<const Elem> point) const {
  if (point.size() != axes_.size()) return false;
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (point[i] >= field_->q()) return false;
    if (axes_[i] == AxisKind::Multiplicative && point[i] == 0) return false;
  }
  return true;
}

std::size_t GroupSpec::index_of(std::span<const Elem> point) const {
  if (!contains(point)) throw Error(ErrorCode::PointOutsideCarrier, "point not in the carrier of G^d");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < point.size(); ++i) {
    const std::size_t coord = axes_[i] == AxisKind::Additive ? point[i] : field_->dlog(point[i]);
    idx += coord * strides_[i];
  }
  return idx;
}

Point GroupSpec::point_at(std::size_t index) const {
  Point pt(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const auto coord = static_cast<std::uint32_t>(index / strides_[i] % sizes_[i]);
    pt[i] = axes_[i] == AxisKind::Additive ? coord : field_->exp(coord);
  }
  return pt;
}

std::size_t GroupSpec::identity() const { return 0; }

std::uint32_t GroupSpec::combine_coord(std::size_t axis, std::uint32_t a, std::uint32_t b) const {
  if (axes_[axis] == AxisKind::Additive) return field_->add(a, b);
  const std::uint32_t s = a + b;
  return s >= sizes_[axis] ? s - static_cast<std::uint32_t>(sizes_[axis]) : s;
}

std::uint32_t GroupSpec::inverse_coord(std::size_t axis, std::uint32_t a) const {
  if (axes_[axis] == AxisKind::Additive) return field_->neg(a);
  return a == 0 ? 0 : static_cast<std::uint32_t>(sizes_[axis]) - a;
}

std::size_t GroupSpec::combine(std::size_t a, std::size_t b) const {
  std::size_t out = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const auto ca = static_cast<std::uint32_t>(a / strides_[i] % sizes_[i]);
    const auto cb = static_cast<std::uint32_t>(b / strides_[i] % sizes_[i]);
    out += combine_coord(i, ca, cb) * strides_[i];
  }
  return out;
}

std::size_t GroupSpec::inverse(std::size_t a) const {
  std::size_t out = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    out += inverse_coord(i, static_cast<std::uint32_t>(a / strides_[i] % sizes_[i])) * strides_[i];
  }
  return out;
}

bool GroupSpec::operator==(const GroupSpec& o) const {
  if (axes_ != o.axes_) return false;
  if (field_ == o.field_) return true;
  return field_->p() == o.field_->p() && field_->k() == o.field_->k() && field_->modulus() == o.field_->modulus();
}

bool CharIndex::is_trivial() const {
  return std::all_of(labels.begin(), labels.end(), [](std::uint32_t l) { return l == 0; });
}

std::size_t char_linear_index(const GroupSpec& spec, const CharIndex& chi) {
  if (chi.labels.size() != spec.dim()) throw Error(ErrorCode::SpecMismatch, "character arity");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < spec.dim(); ++i) {
    if (chi.labels[i] >= spec.axis_size(i)) throw Error(ErrorCode::SpecMismatch, "character label out of range");
    idx = idx * spec.axis_size(i) + chi.labels[i];
  }
  return idx;
}

CharIndex char_at(const GroupSpec& spec, std::size_t index) {
  CharIndex chi;
  chi.labels.resize(spec.dim());
  for (std::size_t i = spec.dim(); i-- > 0;) {
    chi.labels[i] = static_cast<std::uint32_t>(index % spec.axis_size(i));
    index /= spec.axis_size(i);
  }
  return chi;
}

CharIndex inverse_char(const GroupSpec& spec, const CharIndex& chi) {
  CharIndex out = chi;
  for (std::size_t i = 0; i < spec.dim(); ++i) {
    if (spec.axis(i) == AxisKind::Additive) {
      out.labels[i] = spec.field().neg(chi.labels[i]);
    } else {
      const auto n = static_cast<std::uint32_t>(spec.axis_size(i));
      out.labels[i] = chi.labels[i] == 0 ? 0 : n - chi.labels[i];
    }
  }
  return out;
}

namespace {

// Exponent of the root of unity for label l at coordinate c, and its order.
std::uint32_t axis_phase(const GroupSpec& spec, std::size_t axis, std::uint32_t l, std::uint32_t c) {
  const FieldCtx& f = spec.field();
  if (spec.axis(axis) == AxisKind::Additive) return f.trace(f.mul(l, c));
  const std::uint64_t n = spec.axis_size(axis);
  return static_cast<std::uint32_t>(std::uint64_t{l} * c % n);
}

std::uint32_t axis_root_order(const GroupSpec& spec, std::size_t axis) {
  return spec.axis(axis) == AxisKind::Additive ? spec.field().p() : static_cast<std::uint32_t>(spec.axis_size(axis));
}

Complex root_of_unity(std::uint32_t t, std::uint32_t order, int sign) {
  const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(order);
  return {std::cos(angle), std::sin(angle)};
}

// In-place naive DFT along one axis: out[l] = sum_c in[c] * w^(sign * phase(l, c)).
void transform_axis(const GroupSpec& spec, std::vector<Complex>& data, std::size_t axis, int sign) {
  const std::size_t n = spec.axis_size(axis);
  std::size_t inner = 1;
  for (std::size_t i = axis + 1; i < spec.dim(); ++i) inner *= spec.axis_size(i);
  const std::size_t outer = spec.size() / (n * inner);
  const std::size_t lines = outer * inner;

  const std::uint32_t order = axis_root_order(spec, axis);
  std::vector<double> wr(order), wi(order);
  for (std::uint32_t t = 0; t < order; ++t) {
    const Complex w = root_of_unity(t, order, sign);
    wr[t] = w.real();
    wi[t] = w.imag();
  }

  std::vector<double> xr(lines * n), xi(lines * n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t line = o * inner + in;
      for (std::size_t c = 0; c < n; ++c) {
        const Complex v = data[(o * n + c) * inner + in];
        xr[line * n + c] = v.real();
        xi[line * n + c] = v.imag();
      }
    }
  }

  const auto& kern = kernels::active();
  std::vector<std::uint32_t> idx(n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t c = 0; c < n; ++c) {
      idx[c] = axis_phase(spec, axis, static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(c));
    }
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t in = 0; in < inner; ++in) {
        const std::size_t line = o * inner + in;
        data[(o * n + l) * inner + in] =
            kern.gather_dot(xr.data() + line * n, xi.data() + line * n, idx.data(), n, wr.data(), wi.data());
      }
    }
  }
}

void require_same_spec(const GroupSpec& a, const GroupSpec& b) {
  if (!(a == b)) throw Error(ErrorCode::SpecMismatch, "functions live on different groups");
}

}  // namespace

Complex character_value(const GroupSpec& spec, const CharIndex& chi, std::size_t point_index) {
  if (chi.labels.size() != spec.dim()) throw Error(ErrorCode::SpecMismatch, "character arity");
  Complex v{1.0, 0.0};
  std::size_t rest = point_index;
  for (std::size_t i = spec.dim(); i-- > 0;) {
    const auto c = static_cast<std::uint32_t>(rest % spec.axis_size(i));
    rest /= spec.axis_size(i);
    v *= root_of_unity(axis_phase(spec, i, chi.labels[i], c), axis_root_order(spec, i), +1);
  }
  return v;
}

DenseFn::DenseFn(GroupSpec s) : spec(std::move(s)), values(spec.size()) {}

DenseFn::DenseFn(GroupSpec s, std::vector<Complex> v) : spec(std::move(s)), values(std::move(v)) {
  if (values.size() != spec.size()) throw Error(ErrorCode::SpecMismatch, "value count differs from |G^d|");
}

Spectrum::Spectrum(GroupSpec s) : spec(std::move(s)), coeffs(spec.size()) {}

Spectrum::Spectrum(GroupSpec s, std::vector<Complex> c) : spec(std::move(s)), coeffs(std::move(c)) {
  if (coeffs.size() != spec.size()) throw Error(ErrorCode::SpecMismatch, "coefficient count differs from |G^d|");
}

DenseFn indicator(const GroupSpec& spec, std::span<const Point> points) {
  DenseFn f(spec);
  for (const auto& pt : points) f.values[spec.index_of(pt)] = 1.0;
  return f;
}

DenseFn indicator_of_indices(const GroupSpec& spec, std::span<const std::size_t> indices) {
  DenseFn f(spec);
  for (const auto i : indices) {
    if (i >= spec.size()) throw Error(ErrorCode::PointOutsideCarrier, "index " + std::to_string(i));
    f.values[i] = 1.0;
  }
  return f;
}

Spectrum fourier_forward(const DenseFn& f) {
  std::vector<Complex> data = f.values;
  for (std::size_t axis = 0; axis < f.spec.dim(); ++axis) transform_axis(f.spec, data, axis, -1);
  const double scale = 1.0 / static_cast<double>(f.spec.size());
  for (auto& v : data) v *= scale;
  return Spectrum(f.spec, std::move(data));
}

DenseFn fourier_inverse(const Spectrum& s) {
  std::vector<Complex> data = s.coeffs;
  for (std::size_t axis = 0; axis < s.spec.dim(); ++axis) transform_axis(s.spec, data, axis, +1);
  return DenseFn(s.spec, std::move(data));
}

DenseFn convolve(const DenseFn& f, const DenseFn& g) {
  require_same_spec(f.spec, g.spec);
  Spectrum a = fourier_forward(f);
  const Spectrum b = fourier_forward(g);
  const double n = static_cast<double>(f.spec.size());
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] *= n * b.coeffs[i];
  return fourier_inverse(a);
}

DenseFn convolve_direct(const DenseFn& f, const DenseFn& g) {
  require_same_spec(f.spec, g.spec);
  const GroupSpec& spec = f.spec;
  DenseFn out(spec);
  for (std::size_t y = 0; y < spec.size(); ++y) {
    if (f.values[y] == Complex{}) continue;
    const std::size_t y_inv = spec.inverse(y);
    for (std::size_t x = 0; x < spec.size(); ++x) out.values[x] += f.values[y] * g.values[spec.combine(x, y_inv)];
  }
  return out;
}

double plancherel_check(const DenseFn& f, const DenseFn& g) {
  require_same_spec(f.spec, g.spec);
  Complex lhs{};
  for (std::size_t i = 0; i < f.values.size(); ++i) lhs += f.values[i] * std::conj(g.values[i]);
  const Spectrum a = fourier_forward(f), b = fourier_forward(g);
  Complex rhs{};
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) rhs += a.coeffs[i] * std::conj(b.coeffs[i]);
  rhs *= static_cast<double>(f.spec.size());
  return std::abs(lhs - rhs);
}

UniformityNorm uniformity_norm(const Spectrum& s) {
  if (s.spec.size() < 2) throw Error(ErrorCode::PreconditionViolated, "uniformity norm needs |G^d| >= 2");
  UniformityNorm out;
  std::size_t best = 1;
  out.value = -1.0;
  for (std::size_t i = 1; i < s.coeffs.size(); ++i) {  // index 0 is the trivial character
    const double m = std::abs(s.coeffs[i]);
    if (m > out.value) {
      out.value = m;
      best = i;
    }
  }
  out.argmax = char_at(s.spec, best);
  return out;
}

UniformityNorm uniformity_norm(const DenseFn& f) { return uniformity_norm(fourier_forward(f)); }

}  // namespace fflab

namespace fflab {

Complex additive_character(const FieldCtx& f, Elem b, Elem c) {
  const double angle = 2.0 * std::numbers::pi * f.trace(f.mul(b, c)) / f.p();
  return {std::cos(angle), std::sin(angle)};
}

Complex multiplicative_character(const FieldCtx& f, std::uint32_t j, Elem x) {
  if (x == 0) return {0.0, 0.0};
  const std::uint64_t n = f.q() - 1;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(std::uint64_t{j} * f.dlog(x) % n) / n;
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace fflab
