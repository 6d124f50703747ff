#include "fflab/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fflab/expander.hpp"

namespace fflab {

namespace {

// Coordinate-wise group law with small lookup tables, for the hot incidence loop.
class Combiner {
 public:
  explicit Combiner(const GroupSpec& spec) : spec_(spec), strides_(spec.dim()) {
    std::size_t s = 1;
    for (std::size_t i = spec.dim(); i-- > 0;) {
      strides_[i] = s;
      s *= spec.axis_size(i);
    }
    const FieldCtx& f = spec.field();
    if (f.k() > 1 && f.q() <= 1024) {
      add_table_.resize(std::size_t{f.q()} * f.q());
      for (Elem a = 0; a < f.q(); ++a) {
        for (Elem b = 0; b < f.q(); ++b) add_table_[std::size_t{a} * f.q() + b] = f.add(a, b);
      }
    }
  }

  std::vector<std::uint32_t> coords(std::size_t index) const {
    std::vector<std::uint32_t> c(spec_.dim());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = static_cast<std::uint32_t>(index / strides_[i] % spec_.axis_size(i));
    return c;
  }

  std::size_t combine(const std::uint32_t* a, const std::uint32_t* b) const {
    std::size_t out = 0;
    const FieldCtx& f = spec_.field();
    for (std::size_t i = 0; i < strides_.size(); ++i) {
      std::uint32_t c;
      if (spec_.axis(i) == AxisKind::Multiplicative || f.k() == 1) {
        const auto n = static_cast<std::uint32_t>(spec_.axis_size(i));
        c = a[i] + b[i];
        if (c >= n) c -= n;
      } else if (!add_table_.empty()) {
        c = add_table_[std::size_t{a[i]} * f.q() + b[i]];
      } else {
        c = f.add(a[i], b[i]);
      }
      out += c * strides_[i];
    }
    return out;
  }

 private:
  const GroupSpec& spec_;
  std::vector<std::size_t> strides_;
  std::vector<std::uint32_t> add_table_;
};

std::vector<std::uint32_t> flat_coords(const Combiner& comb, std::span<const std::size_t> set, std::size_t d) {
  std::vector<std::uint32_t> out;
  out.reserve(set.size() * d);
  for (const auto i : set) {
    const auto c = comb.coords(i);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

void check_indices(const GroupSpec& spec, std::span<const std::size_t> set) {
  for (const auto i : set) {
    if (i >= spec.size()) throw Error(ErrorCode::PointOutsideCarrier, "point index " + std::to_string(i));
  }
}

int degree_or_zero(const PolyUni& f) { return std::max(f.degree(), 0); }

}  // namespace

IndexSet make_index_set(const GroupSpec& spec, std::span<const Point> points) {
  IndexSet out;
  out.reserve(points.size());
  for (const auto& pt : points) out.push_back(spec.index_of(pt));
  return make_index_set(spec, std::move(out));
}

IndexSet make_index_set(const GroupSpec& spec, std::vector<std::size_t> indices) {
  check_indices(spec, indices);
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return indices;
}

std::uint64_t count_incidences(const GroupSpec& spec, std::span<const std::size_t> x, std::span<const std::size_t> y,
                               std::span<const std::size_t> p) {
  check_indices(spec, x);
  check_indices(spec, y);
  check_indices(spec, p);
  std::vector<char> in_p(spec.size(), 0);
  for (const auto i : p) in_p[i] = 1;
  const Combiner comb(spec);
  const std::size_t d = spec.dim();
  const auto xc = flat_coords(comb, x, d);
  const auto yc = flat_coords(comb, y, d);
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) count += in_p[comb.combine(&xc[i * d], &yc[j * d])];
  }
  return count;
}

IndexSet product_set(const GroupSpec& spec, std::span<const std::size_t> x, std::span<const std::size_t> y) {
  check_indices(spec, x);
  check_indices(spec, y);
  std::vector<char> mask(spec.size(), 0);
  const Combiner comb(spec);
  const std::size_t d = spec.dim();
  const auto xc = flat_coords(comb, x, d);
  const auto yc = flat_coords(comb, y, d);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) mask[comb.combine(&xc[i * d], &yc[j * d])] = 1;
  }
  IndexSet out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) out.push_back(i);
  }
  return out;
}

IncidenceReport incidence_bound_check(const GroupSpec& spec, std::span<const std::size_t> x,
                                      std::span<const std::size_t> y, std::span<const std::size_t> p, Pivot pivot) {
  const std::span<const std::size_t> pivot_set = pivot == Pivot::X ? x : pivot == Pivot::Y ? y : p;
  const double norm = uniformity_norm(indicator_of_indices(spec, pivot_set)).value;
  return incidence_bound_check(spec, x, y, p, pivot, norm);
}

IncidenceReport incidence_bound_check(const GroupSpec& spec, std::span<const std::size_t> x,
                                      std::span<const std::size_t> y, std::span<const std::size_t> p, Pivot pivot,
                                      double pivot_norm) {
  IncidenceReport r;
  r.count = count_incidences(spec, x, y, p);
  const double g = static_cast<double>(spec.size());
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size()),
               np = static_cast<double>(p.size());
  r.main_term = nx * ny * np / g;
  const double others = pivot == Pivot::X ? ny * np : pivot == Pivot::Y ? nx * np : nx * ny;
  r.pivot_norm = pivot_norm;
  r.error_bound = pivot_norm * std::sqrt(others) * g;
  r.deviation = std::abs(static_cast<double>(r.count) - r.main_term);
  r.pass = r.deviation <= r.error_bound + kBoundSlack;
  return r;
}

double salem_constant(const GroupSpec& spec, std::span<const std::size_t> set) {
  if (set.empty()) throw Error(ErrorCode::EmptySet, "Salem constant of the empty set");
  const double u = uniformity_norm(indicator_of_indices(spec, set)).value;
  return u * static_cast<double>(spec.size()) / std::sqrt(static_cast<double>(set.size()));
}

namespace {

// Factors of `own` that do not occur in `other`, and the gcd of their exponents.
bool private_factor_clause(const Factorization& own, const Factorization& other) {
  unsigned g = 0;
  bool any = false;
  for (const auto& fa : own.factors) {
    const bool shared = std::any_of(other.factors.begin(), other.factors.end(),
                                    [&](const Factor& fb) { return fb.poly == fa.poly; });
    if (!shared) {
      g = std::gcd(g, fa.exponent);
      any = true;
    }
  }
  return any && g == 1;
}

[[noreturn]] void violated(const std::string& clause) { throw Error(ErrorCode::HypothesisViolated, clause); }

}  // namespace

SalemCertificate build_graph_set(const FieldPtr& field, const PolyUni& f, const PolyUni& g, SalemCase salem_case) {
  const FieldCtx& ctx = *field;
  const int df = f.degree(), dg = g.degree();
  SalemHypotheses h;
  const int m = degree_or_zero(f) + degree_or_zero(g);
  h.m_below_p = m < static_cast<int>(ctx.p());

  std::vector<AxisKind> axes;
  switch (salem_case) {
    case SalemCase::One:
      axes = {AxisKind::Additive, AxisKind::Additive};
      h.degree_order = df >= 1 && df < dg;
      if (!h.degree_order) violated("case 1 needs 1 <= deg f < deg g");
      break;
    case SalemCase::Two:
      axes = {AxisKind::Additive, AxisKind::Multiplicative};
      h.gcd_condition = df >= 1 && dg >= 1 && std::gcd(static_cast<std::uint32_t>(dg), ctx.q() - 1) == 1;
      if (!h.gcd_condition) violated("case 2 needs gcd(deg g, q - 1) = 1 and deg f >= 1");
      break;
    case SalemCase::Three:
      axes = {AxisKind::Multiplicative, AxisKind::Multiplicative};
      if (!f.factored || !g.factored) {
        throw Error(ErrorCode::FactoredFormRequired, "case 3 needs factored f and g");
      }
      h.f_private_factors = private_factor_clause(*f.factored, *g.factored);
      h.g_private_factors = private_factor_clause(*g.factored, *f.factored);
      if (!h.f_private_factors) violated("case 3: f lacks private factors with exponent gcd 1");
      if (!h.g_private_factors) violated("case 3: g lacks private factors with exponent gcd 1");
      break;
  }
  if (!h.m_below_p) violated("deg f + deg g must be below the characteristic");

  GroupSpec spec(field, axes);
  std::vector<std::size_t> idx;
  std::size_t excluded = 0;
  for (Elem x = 0; x < ctx.q(); ++x) {
    const Point pt{eval(ctx, f, x), eval(ctx, g, x)};
    if (!spec.contains(pt)) {
      ++excluded;
      continue;
    }
    idx.push_back(spec.index_of(pt));
  }
  IndexSet points = make_index_set(spec, std::move(idx));
  if (points.empty()) throw Error(ErrorCode::EmptySet, "graph set is empty");
  const double u = uniformity_norm(indicator_of_indices(spec, points)).value;
  const double measured = u * static_cast<double>(spec.size()) / std::sqrt(static_cast<double>(points.size()));
  return SalemCertificate{salem_case, spec, std::move(points), excluded, static_cast<unsigned>(m), u, measured, h};
}

WeilReport weil_check(const FieldCtx& field, WeilVariant variant, const PolyUni& f, const PolyUni& g, Elem b,
                      std::uint32_t j) {
  const double sqrt_q = std::sqrt(static_cast<double>(field.q()));
  const std::uint32_t order = field.q() - 1;
  WeilReport r;
  Complex sum{};
  if (variant == WeilVariant::Additive) {
    if (b == 0) violated("additive character must be nontrivial");
    if (f.degree() < 1) violated("deg f must be positive");
    if (static_cast<std::uint32_t>(f.degree()) % field.p() == 0) violated("p divides deg f");
    for (Elem x = 0; x < field.q(); ++x) sum += additive_character(field, b, eval(field, f, x));
    r.bound = (f.degree() - 1) * sqrt_q;
  } else {
    if (j % order == 0) violated("multiplicative character must be nontrivial");
    if (!g.factored) throw Error(ErrorCode::FactoredFormRequired, "g needs a factored form");
    const std::uint32_t s = order / std::gcd(j % order, order);
    const auto& factors = g.factored->factors;
    const bool not_power = std::any_of(factors.begin(), factors.end(), [s](const Factor& fa) { return fa.exponent % s != 0; });
    if (!not_power) violated("g is a constant times an s-th power");
    const auto d = static_cast<double>(distinct_root_count(*g.factored));
    for (Elem x = 0; x < field.q(); ++x) {
      Complex term = multiplicative_character(field, j, eval(field, g, x));
      if (variant == WeilVariant::Mixed) term *= additive_character(field, b, eval(field, f, x));
      sum += term;
    }
    const double df = variant == WeilVariant::Mixed ? degree_or_zero(f) : 0.0;
    r.bound = (df + d - 1.0) * sqrt_q;
  }
  r.sum = sum;
  r.sum_magnitude = std::abs(sum);
  r.pass = r.sum_magnitude <= r.bound + kBoundSlack;
  return r;
}

KatzReport katz_ratio(const FieldPtr& field, const PolyBi& poly, Elem a) {
  const FieldCtx& ctx = *field;
  KatzReport r;
  r.degree = poly.degree();
  if (r.degree < 1) throw Error(ErrorCode::PreconditionViolated, "P must be nonconstant");
  const GroupSpec spec(field, {AxisKind::Additive, AxisKind::Additive});
  const auto values = evaluation_table(ctx, poly);
  std::vector<std::size_t> level;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == a) level.push_back(i);  // index x * q + y matches the row-major layout
  }
  r.level_set_size = level.size();
  r.bias = uniformity_norm(indicator_of_indices(spec, level)).value;
  const double q = ctx.q();
  r.ratio = r.bias * q * std::sqrt(q) / (r.degree * r.degree);
  r.has_linear_factor = !linear_factor_scan(ctx, sub_const(ctx, poly, a)).empty();
  return r;
}

ZeroCountReport zero_count_check(const FieldCtx& field, const PolyUni& f) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "zero polynomial");
  ZeroCountReport r;
  r.degree = f.degree();
  for (Elem x = 0; x < field.q(); ++x) r.zeros += eval(field, f, x) == 0;
  r.bound = static_cast<std::uint64_t>(r.degree);
  r.pass = r.zeros <= r.bound;
  return r;
}

ZeroCountReport zero_count_check(const FieldCtx& field, const PolyBi& f) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "zero polynomial");
  ZeroCountReport r;
  r.degree = f.degree();
  for (const Elem v : evaluation_table(field, f)) r.zeros += v == 0;
  r.bound = static_cast<std::uint64_t>(r.degree) * field.q();
  r.pass = r.zeros <= r.bound;
  return r;
}

PrecursorReport theorem22_precursor(const GroupSpec& spec, std::span<const std::size_t> x,
                                    std::span<const std::size_t> xtilde, std::span<const std::size_t> y) {
  for (const auto i : x) {
    if (!std::binary_search(xtilde.begin(), xtilde.end(), i)) throw Error(ErrorCode::NotSubset, "X is not inside X~");
  }
  PrecursorReport r;
  const IndexSet p = product_set(spec, x, y);
  r.product_size = p.size();
  r.salem_constant = salem_constant(spec, xtilde);
  r.middle = count_incidences(spec, xtilde, y, p);
  const double nxt = static_cast<double>(xtilde.size()), ny = static_cast<double>(y.size()),
               np = static_cast<double>(p.size());
  r.lhs = static_cast<double>(x.size()) * ny;
  r.rhs = nxt * ny * np / static_cast<double>(spec.size()) + r.salem_constant * std::sqrt(nxt * ny * np);
  r.pass = r.lhs <= static_cast<double>(r.middle) && static_cast<double>(r.middle) <= r.rhs + kBoundSlack;
  return r;
}

}  // namespace fflab
