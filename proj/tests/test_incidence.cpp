#include <gtest/gtest.h>

#include <random>

#include "fflab/incidence.hpp"
#include "fflab/sampling.hpp"
#include "oracle.hpp"

using namespace fflab;

namespace {

using Axes = std::vector<AxisKind>;
constexpr auto Add = AxisKind::Additive;
constexpr auto Mul = AxisKind::Multiplicative;

IndexSet all_indices(const GroupSpec& g) {
  IndexSet s(g.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = i;
  return s;
}

IndexSet random_set(const GroupSpec& g, std::mt19937_64& rng) {
  const std::size_t m = 1 + uniform_below(rng, g.size());
  return random_index_subset(rng, g.size(), m);
}

IndexSet parabola(const GroupSpec& g, std::uint32_t p) {
  std::vector<Point> pts;
  for (Elem x = 0; x < p; ++x) pts.push_back({x, x * x % p});
  return make_index_set(g, pts);
}

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

}  // namespace

TEST(CountIncidences, Examples) {
  const GroupSpec g(build_field(5, 1), Axes{Add, Mul});
  const auto all = all_indices(g);
  EXPECT_EQ(count_incidences(g, all, all, all), g.size() * g.size());
  const std::size_t a = 7, b = 13;
  EXPECT_EQ(count_incidences(g, IndexSet{a}, IndexSet{b}, IndexSet{g.combine(a, b)}), 1u);
  EXPECT_EQ(code_of([&] { make_index_set(g, std::vector<Point>{{1, 0}}); }), ErrorCode::PointOutsideCarrier);
}

TEST(CountIncidences, MatchesConvolutionRoute) {
  std::mt19937_64 rng(21);
  for (const GroupSpec& g : {GroupSpec(build_field(7, 1), Axes{Add}), GroupSpec(build_field(3, 2), Axes{Add, Mul}),
                             GroupSpec(build_field(5, 1), Axes{Mul, Add})}) {
    for (int t = 0; t < 50; ++t) {
      const auto x = random_set(g, rng), y = random_set(g, rng), p = random_set(g, rng);
      const auto conv = convolve(indicator_of_indices(g, x), indicator_of_indices(g, y));
      double route = 0;
      for (auto z : p) route += conv.values[z].real();
      EXPECT_EQ(count_incidences(g, x, y, p), static_cast<std::uint64_t>(std::llround(route)));
    }
  }
}

TEST(IncidenceBound, FullGroup) {
  const GroupSpec g(build_field(7, 1), Axes{Add, Add});
  const auto all = all_indices(g);
  const auto r = incidence_bound_check(g, all, all, all, Pivot::X);
  EXPECT_EQ(r.count, 49u * 49u);
  EXPECT_DOUBLE_EQ(r.main_term, 49.0 * 49.0);
  EXPECT_NEAR(r.error_bound, 0.0, 1e-9);
  EXPECT_TRUE(r.pass);
}

TEST(IncidenceBound, HoldsOnRandomTriplesForEveryPivot) {
  std::mt19937_64 rng(77);
  for (auto [p, k] : {std::pair{5u, 1u}, {7u, 1u}, {3u, 2u}, {11u, 1u}}) {
    const auto f = build_field(p, k);
    for (const GroupSpec& g : {GroupSpec(f, Axes{Add}), GroupSpec(f, Axes{Add, Mul})}) {
      for (int t = 0; t < 60; ++t) {
        const auto x = random_set(g, rng), y = random_set(g, rng), s = random_set(g, rng);
        for (auto pivot : {Pivot::X, Pivot::Y, Pivot::P}) {
          const auto r = incidence_bound_check(g, x, y, s, pivot);
          EXPECT_TRUE(r.pass) << r.deviation << " > " << r.error_bound;
          EXPECT_EQ(r.count, count_incidences(g, x, y, s));
        }
      }
    }
  }
}

TEST(IncidenceBound, ParabolaPivot) {
  const std::uint32_t p = 11;
  const GroupSpec g(build_field(p, 1), Axes{Add, Add});
  const auto x = parabola(g, p);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto y = random_set(g, rng), s = random_set(g, rng);
    const auto r = incidence_bound_check(g, x, y, s, Pivot::X);
    const double norm = std::sqrt(p) / (p * p);
    EXPECT_NEAR(r.pivot_norm, norm, 1e-9);
    EXPECT_NEAR(r.error_bound, norm * std::sqrt(double(y.size()) * s.size()) * p * p, 1e-6);
    EXPECT_TRUE(r.pass);
  }
}

TEST(SalemConstant, Examples) {
  const GroupSpec g(build_field(13, 1), Axes{Add, Add});
  EXPECT_NEAR(salem_constant(g, all_indices(g)), 0.0, 1e-9);
  EXPECT_NEAR(salem_constant(g, IndexSet{17}), 1.0, 1e-12);
  EXPECT_NEAR(salem_constant(g, parabola(g, 13)), 1.0, 1e-9);
  EXPECT_EQ(code_of([&] { salem_constant(g, IndexSet{}); }), ErrorCode::EmptySet);
  const auto par = parabola(g, 13);
  EXPECT_NEAR(salem_constant(g, par) * std::sqrt(double(par.size())) / g.size(),
              uniformity_norm(indicator_of_indices(g, par)).value, 1e-15);
}

TEST(GraphSet, CaseOneParabola) {
  for (std::uint32_t p : {5u, 7u, 11u, 13u}) {
    const auto c = build_graph_set(build_field(p, 1), poly_x(), PolyUni({0, 0, 1}), SalemCase::One);
    EXPECT_EQ(c.m, 3u);
    EXPECT_EQ(c.points.size(), p);
    EXPECT_NEAR(c.measured_constant, 1.0, 1e-9);
    EXPECT_TRUE(c.hypotheses.degree_order && c.hypotheses.m_below_p);
  }
  const auto cubic = build_graph_set(build_field(7, 1), poly_x(), PolyUni({0, 0, 0, 1}), SalemCase::One);
  EXPECT_LE(cubic.measured_constant, 4.0 + 1e-6);
}

TEST(GraphSet, CaseTwoAndThree) {
  const auto f7 = build_field(7, 1);
  // deg g = 5 is coprime to 6.
  const auto two = build_graph_set(f7, poly_x(), PolyUni({1, 0, 0, 0, 0, 1}), SalemCase::Two);
  EXPECT_LE(two.measured_constant, 6.0 + 1e-6);
  EXPECT_EQ(code_of([&] { build_graph_set(f7, poly_x(), PolyUni({0, 0, 1}), SalemCase::Two); }),
            ErrorCode::HypothesisViolated);

  for (std::uint32_t p : {5u, 7u, 11u, 13u}) {
    const auto f = build_field(p, 1);
    const auto fx = with_factorization(*f, poly_x(), {1, {{poly_x(), 1}}});
    const auto gx = with_factorization(*f, PolyUni({1, 1}), {1, {{PolyUni({1, 1}), 1}}});
    const auto c = build_graph_set(f, fx, gx, SalemCase::Three);
    EXPECT_TRUE(c.hypotheses.f_private_factors && c.hypotheses.g_private_factors);
    EXPECT_EQ(c.excluded, 2u);  // x = 0 and x = -1
    EXPECT_LE(c.measured_constant, 2.0 + 1e-6);
  }
  EXPECT_EQ(code_of([&] { build_graph_set(f7, poly_x(), PolyUni({1, 1}), SalemCase::Three); }),
            ErrorCode::FactoredFormRequired);
}

TEST(GraphSet, CaseOneHypotheses) {
  const auto f = build_field(7, 1);
  EXPECT_EQ(code_of([&] { build_graph_set(f, PolyUni({0, 0, 1}), poly_x(), SalemCase::One); }),
            ErrorCode::HypothesisViolated);
  EXPECT_EQ(code_of([&] { build_graph_set(f, PolyUni({0, 0, 1}), PolyUni({0, 0, 0, 0, 0, 1}), SalemCase::One); }),
            ErrorCode::HypothesisViolated);
}

TEST(Weil, Examples) {
  const auto f7 = build_field(7, 1);
  const auto sq = weil_check(*f7, WeilVariant::Additive, PolyUni({0, 0, 1}), {}, 1, 0);
  EXPECT_NEAR(sq.sum_magnitude, std::sqrt(7.0), 1e-9);
  EXPECT_NEAR(sq.bound, std::sqrt(7.0), 1e-12);
  EXPECT_TRUE(sq.pass);
  const auto lin = weil_check(*f7, WeilVariant::Additive, poly_x(), {}, 3, 0);
  EXPECT_NEAR(lin.sum_magnitude, 0.0, 1e-9);
  EXPECT_TRUE(lin.pass);

  const auto f5 = build_field(5, 1);
  const auto gx = with_factorization(*f5, poly_x(), {1, {{poly_x(), 1}}});
  const auto quad = weil_check(*f5, WeilVariant::Multiplicative, {}, gx, 0, 2);
  EXPECT_NEAR(quad.sum_magnitude, 0.0, 1e-9);
  EXPECT_DOUBLE_EQ(quad.bound, 0.0);
  EXPECT_TRUE(quad.pass);
}

TEST(Weil, HypothesisErrors) {
  const auto f7 = build_field(7, 1);
  EXPECT_EQ(code_of([&] { weil_check(*f7, WeilVariant::Additive, PolyUni({0, 0, 1}), {}, 0, 0); }),
            ErrorCode::HypothesisViolated);
  EXPECT_EQ(code_of([&] { weil_check(*f7, WeilVariant::Additive, PolyUni({0, 0, 0, 0, 0, 0, 0, 1}), {}, 1, 0); }),
            ErrorCode::HypothesisViolated);
  EXPECT_EQ(code_of([&] { weil_check(*f7, WeilVariant::Multiplicative, {}, poly_x(), 0, 1); }),
            ErrorCode::FactoredFormRequired);
  const auto gx = with_factorization(*f7, poly_x(), {1, {{poly_x(), 1}}});
  EXPECT_EQ(code_of([&] { weil_check(*f7, WeilVariant::Multiplicative, {}, gx, 0, 0); }),
            ErrorCode::HypothesisViolated);
  // x^2 is a square, so the quadratic character (j = 3, order 2) is excluded.
  const auto sq = with_factorization(*f7, PolyUni({0, 0, 1}), {1, {{poly_x(), 2}}});
  EXPECT_EQ(code_of([&] { weil_check(*f7, WeilVariant::Mixed, poly_x(), sq, 1, 3); }), ErrorCode::HypothesisViolated);
  EXPECT_TRUE(weil_check(*f7, WeilVariant::Mixed, poly_x(), sq, 1, 2).pass);
}

TEST(Weil, AdditiveSweepMatchesDirectSum) {
  for (std::uint32_t p : {5u, 7u}) {
    const auto f = build_field(p, 1);
    for (unsigned deg = 2; deg <= 4; ++deg) {
      if (deg % p == 0) continue;
      std::uint32_t count = 1;
      for (unsigned i = 0; i < deg; ++i) count *= p;
      for (std::uint32_t n = 0; n < count; ++n) {
        auto c = oracle::digits_of(n, p, deg);
        c.push_back(1);
        const PolyUni poly(c);
        for (Elem b = 1; b < p; ++b) {
          std::complex<double> direct{};
          for (std::uint64_t x = 0; x < p; ++x) {
            std::uint64_t v = 0;
            for (std::size_t i = c.size(); i-- > 0;) v = (v * x + c[i]) % p;
            direct += oracle::e(static_cast<double>(v * b % p), p);
          }
          const auto r = weil_check(*f, WeilVariant::Additive, poly, {}, b, 0);
          EXPECT_LT(std::abs(r.sum - direct), 1e-9);
          ASSERT_TRUE(r.pass) << coeff_string(c) << " b=" << b;
        }
      }
    }
  }
}

TEST(Weil, MultiplicativeOverExtension) {
  const auto f = build_field(3, 2);
  // g = x (x + 1): d = 2, bound (d - 1) sqrt(q) = 3.
  const auto g = with_factorization(*f, PolyUni({0, 1, 1}), {1, {{poly_x(), 1}, {PolyUni({1, 1}), 1}}});
  for (std::uint32_t j = 1; j < 8; ++j) {
    const auto r = weil_check(*f, WeilVariant::Multiplicative, {}, g, 0, j);
    EXPECT_DOUBLE_EQ(r.bound, 3.0);
    EXPECT_TRUE(r.pass) << j;
  }
}

TEST(Katz, Examples) {
  const auto f = build_field(7, 1);
  const PolyBi xy({{1, 1, 1}});
  EXPECT_TRUE(katz_ratio(f, xy, 0).has_linear_factor);

  for (std::uint32_t p : {7u, 11u, 19u}) {
    const auto fp = build_field(p, 1);
    const PolyBi circle({{2, 0, 1}, {0, 2, 1}, {0, 0, p - 1}});
    const auto r = katz_ratio(fp, circle, 0);
    EXPECT_FALSE(r.has_linear_factor);
    EXPECT_EQ(r.degree, 2);
    const GroupSpec g(fp, Axes{Add, Add});
    std::vector<Point> level;
    for (Elem x = 0; x < p; ++x) {
      for (Elem y = 0; y < p; ++y) {
        if ((x * x + y * y) % p == 1) level.push_back({x, y});
      }
    }
    EXPECT_EQ(r.level_set_size, level.size());
    const double bias = uniformity_norm(indicator(g, level)).value;
    EXPECT_NEAR(r.bias, bias, 1e-12);
    EXPECT_NEAR(r.ratio, bias * std::pow(p, 1.5) / 4.0, 1e-9);
  }

  // Parabola y = x^2: bias sqrt(q)/q^2, so the ratio is 1/4.
  const auto f11 = build_field(11, 1);
  const auto par = katz_ratio(f11, PolyBi({{2, 0, 1}, {0, 1, 10}}), 0);
  EXPECT_NEAR(par.ratio, 0.25, 1e-9);
  EXPECT_LE(par.ratio, 1.0);
}

TEST(ZeroCount, Examples) {
  const auto f7 = build_field(7, 1);
  const auto r1 = zero_count_check(*f7, PolyUni({6, 0, 1}));
  EXPECT_EQ(r1.zeros, 2u);
  EXPECT_EQ(r1.bound, 2u);
  EXPECT_TRUE(r1.pass);
  const auto r2 = zero_count_check(*build_field(5, 1), PolyBi({{1, 1, 1}}));
  EXPECT_EQ(r2.zeros, 9u);
  EXPECT_EQ(r2.bound, 10u);
  const auto r3 = zero_count_check(*f7, PolyBi({{1, 0, 1}, {0, 1, 6}}));
  EXPECT_EQ(r3.zeros, 7u);
  EXPECT_EQ(r3.bound, 7u);
  EXPECT_TRUE(r3.pass);
  EXPECT_EQ(code_of([&] { zero_count_check(*f7, PolyBi{}); }), ErrorCode::ZeroPolynomial);
  EXPECT_EQ(code_of([&] { zero_count_check(*f7, PolyUni{}); }), ErrorCode::ZeroPolynomial);
}

TEST(ZeroCount, RandomBivariateSweep) {
  std::mt19937_64 rng(12);
  const auto f = build_field(11, 1);
  for (int t = 0; t < 300; ++t) {
    std::vector<Monomial> terms;
    for (unsigned i = 0; i <= 5; ++i) {
      for (unsigned j = 0; i + j <= 5; ++j) {
        if (rng() % 3 == 0) terms.push_back({i, j, static_cast<Elem>(1 + rng() % 10)});
      }
    }
    if (terms.empty()) continue;
    const PolyBi poly(terms);
    const auto r = zero_count_check(*f, poly);
    std::uint64_t zeros = 0;
    for (Elem x = 0; x < 11; ++x) {
      for (Elem y = 0; y < 11; ++y) zeros += eval(*f, poly, x, y) == 0;
    }
    EXPECT_EQ(r.zeros, zeros);
    EXPECT_TRUE(r.pass);
  }
}

TEST(Precursor, Examples) {
  std::mt19937_64 rng(31);
  const GroupSpec g11(build_field(11, 1), Axes{Add, Add});
  const auto par = parabola(g11, 11);
  const auto y = random_index_subset(rng, g11.size(), 10);
  const auto r = theorem22_precursor(g11, par, par, y);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.salem_constant, 1.0, 1e-9);
  EXPECT_EQ(r.product_size, product_set(g11, par, y).size());
  EXPECT_GE(static_cast<double>(r.middle), r.lhs);

  const GroupSpec g5(build_field(5, 1), Axes{Add, Mul});
  const auto all = all_indices(g5);
  const auto full = theorem22_precursor(g5, all, all, all);
  EXPECT_TRUE(full.pass);
  EXPECT_DOUBLE_EQ(full.lhs, 400.0);
  EXPECT_NEAR(full.rhs, 400.0, 1e-6);

  const GroupSpec g13(build_field(13, 1), Axes{Add, Add});
  const auto par13 = parabola(g13, 13);
  const IndexSet half(par13.begin(), par13.begin() + 6);
  EXPECT_TRUE(theorem22_precursor(g13, half, par13, random_set(g13, rng)).pass);
  EXPECT_EQ(code_of([&] { theorem22_precursor(g13, IndexSet{0, 1}, par13, half); }), ErrorCode::NotSubset);
}
