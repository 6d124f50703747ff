#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fflab/expander.hpp"
#include "fflab/kernels.hpp"
#include "fflab/sampling.hpp"

using namespace fflab;

namespace {

ElemSet brute_op(const FieldCtx& f, const ElemSet& a, const ElemSet& b, SetOp op) {
  std::set<Elem> out;
  for (auto x : a) {
    for (auto y : b) {
      switch (op) {
        case SetOp::Add: out.insert(f.add(x, y)); break;
        case SetOp::Sub: out.insert(f.sub(x, y)); break;
        case SetOp::Mul: out.insert(f.mul(x, y)); break;
        case SetOp::Div: out.insert(f.div(x, y)); break;
      }
    }
  }
  return {out.begin(), out.end()};
}

ElemSet random_elems(const FieldCtx& f, std::mt19937_64& rng, std::size_t m, bool nonzero) {
  const auto u = nonzero ? nonzero_elements(f) : all_elements(f);
  return random_subset(rng, u, std::min(m, u.size()));
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

TEST(OpSet, Examples) {
  const auto f = build_field(101, 1);
  ElemSet ap(20);
  for (Elem i = 0; i < 20; ++i) ap[i] = i;
  EXPECT_EQ(op_set(*f, ap, ap, SetOp::Add).size(), 39u);
  EXPECT_EQ(op_set(*f, ElemSet{1, 2, 3}, ElemSet{1, 4, 9}, SetOp::Add), (ElemSet{2, 3, 4, 5, 6, 7, 10, 11, 12}));
  const auto star = nonzero_elements(*f);
  EXPECT_EQ(op_set(*f, star, star, SetOp::Mul), star);
  EXPECT_EQ(code_of([&] { op_set(*f, ap, ap, SetOp::Div); }), ErrorCode::DivisionByZero);
}

TEST(OpSet, MatchesBruteForce) {
  std::mt19937_64 rng(40);
  for (auto [p, k] : {std::pair{31u, 1u}, {101u, 1u}, {1009u, 1u}, {3u, 2u}, {2u, 5u}, {5u, 3u}}) {
    const auto f = build_field(p, k);
    for (int t = 0; t < 30; ++t) {
      const std::size_t m = 1 + uniform_below(rng, std::min<std::uint64_t>(f->q(), 90));
      const auto a = random_elems(*f, rng, m, false);
      const auto b = random_elems(*f, rng, 1 + uniform_below(rng, 90), false);
      const auto bn = random_elems(*f, rng, 1 + uniform_below(rng, 90), true);
      for (auto op : {SetOp::Add, SetOp::Sub, SetOp::Mul}) {
        const auto got = op_set(*f, a, b, op);
        EXPECT_EQ(got, brute_op(*f, a, b, op));
        if (op == SetOp::Add) {
          EXPECT_GE(got.size(), std::max(a.size(), b.size()));
          EXPECT_LE(got.size(), a.size() * b.size());
        }
      }
      EXPECT_EQ(op_set(*f, a, bn, SetOp::Div), brute_op(*f, a, bn, SetOp::Div));
    }
  }
}

TEST(OpSet, KernelsAgree) {
  std::mt19937_64 rng(41);
  const auto f = build_field(1009, 1);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_elems(*f, rng, 80, false), b = random_elems(*f, rng, 70, true);
    std::vector<ElemSet> results;
    for (const char* name : {"scalar", "auto"}) {
      kernels::select(name);
      for (auto op : {SetOp::Add, SetOp::Sub, SetOp::Mul, SetOp::Div}) results.push_back(op_set(*f, a, b, op));
    }
    kernels::select("auto");
    for (int i = 0; i < 4; ++i) EXPECT_EQ(results[i], results[i + 4]);
  }
}

TEST(CyclicSumset, MatchesBruteForce) {
  std::mt19937_64 rng(42);
  for (std::uint32_t n : {1u, 2u, 63u, 64u, 65u, 200u, 1000u}) {
    for (int t = 0; t < 10; ++t) {
      std::vector<std::uint32_t> a, b;
      for (std::uint32_t i = 0; i < n; ++i) {
        if (rng() % 4 == 0) a.push_back(i);
        if (rng() % 5 == 0) b.push_back(i);
      }
      std::set<std::uint32_t> ref;
      for (auto x : a) {
        for (auto y : b) ref.insert((x + y) % n);
      }
      EXPECT_EQ(cyclic_sumset(a, b, n), std::vector<std::uint32_t>(ref.begin(), ref.end()));
    }
  }
}

TEST(DFold, Examples) {
  const auto f = build_field(31, 1);
  EXPECT_EQ(dfold(*f, ElemSet{0, 1}, SetOp::Add, 3), (ElemSet{0, 1, 2, 3}));
  EXPECT_EQ(dfold(*f, ElemSet{f->gen()}, SetOp::Mul, 4), (ElemSet{f->pow(f->gen(), 4)}));
  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_elems(*f, rng, 2 + uniform_below(rng, 8), true);
    EXPECT_EQ(dfold(*f, a, SetOp::Add, 2), op_set(*f, a, a, SetOp::Add));
    EXPECT_EQ(dfold(*f, a, SetOp::Mul, 2), op_set(*f, a, a, SetOp::Mul));
    std::size_t prev = a.size();
    for (unsigned d = 2; d <= 5; ++d) {
      const auto s = dfold(*f, a, SetOp::Add, d);
      EXPECT_GE(s.size(), prev);
      prev = s.size();
    }
  }
  EXPECT_EQ(code_of([&] { dfold(*f, ElemSet{0, 1}, SetOp::Mul, 2); }), ErrorCode::PreconditionViolated);
}

TEST(Images, Examples) {
  const auto f = build_field(101, 1);
  EXPECT_EQ(image_uni(*f, PolyUni({0, 0, 1}), ElemSet{1, 2, 3}), (ElemSet{1, 4, 9}));
  EXPECT_EQ(image_uni(*f, poly_x(), ElemSet{5, 50, 77}), (ElemSet{5, 50, 77}));
  const ElemSet a{3, 8, 40, 99};
  PairSet axa;
  for (auto x : a) {
    for (auto y : a) axa.emplace_back(x, y);
  }
  EXPECT_EQ(image_bi(*f, PolyBi({{1, 0, 1}, {0, 1, 1}}), axa), op_set(*f, a, a, SetOp::Add));
}

TEST(PairSet, DistanceOnIsotropicLine) {
  const auto f = build_field(13, 1);
  const Elem i = 5;  // 5^2 = 25 = -1 mod 13
  PairSet line;
  for (Elem t = 0; t < 13; ++t) line.emplace_back(t, f->mul(i, t));
  const PolyBi dist({{2, 0, 1}, {0, 2, 1}});
  EXPECT_EQ(pair_set(*f, dist, line, line), (ElemSet{0}));
  EXPECT_EQ(pair_set(*f, dist, PairSet{{4, 7}}, PairSet{{4, 7}}), (ElemSet{0}));
  const PolyBi shifted({{2, 0, 1}, {0, 2, 1}, {0, 0, 3}});
  EXPECT_EQ(pair_set(*f, shifted, PairSet{{4, 7}}, PairSet{{4, 7}}), (ElemSet{3}));
}

TEST(PairSet, MatchesQuadrupleLoop) {
  std::mt19937_64 rng(44);
  const auto f = build_field(7, 1);
  for (int t = 0; t < 30; ++t) {
    std::vector<Monomial> terms;
    for (unsigned i = 0; i <= 3; ++i) {
      for (unsigned j = 0; i + j <= 3; ++j) {
        if (rng() % 2) terms.push_back({i, j, static_cast<Elem>(1 + rng() % 6)});
      }
    }
    const PolyBi poly(terms);
    PairSet e, g;
    for (Elem x = 0; x < 7; ++x) {
      for (Elem y = 0; y < 7; ++y) {
        if (rng() % 6 == 0) e.emplace_back(x, y);
        if (rng() % 8 == 0) g.emplace_back(x, y);
      }
    }
    std::set<Elem> ref;
    for (auto [x1, x2] : e) {
      for (auto [y1, y2] : g) ref.insert(eval(*f, poly, f->sub(x1, y1), f->sub(x2, y2)));
    }
    EXPECT_EQ(pair_set(*f, poly, e, g), ElemSet(ref.begin(), ref.end()));
  }
}

TEST(LinearFactors, Examples) {
  const auto f = build_field(7, 1);
  EXPECT_EQ(linear_factor_scan(*f, PolyBi({{1, 1, 1}})), (std::vector<LinearForm>{{1, 0, 0}, {0, 1, 0}}));
  EXPECT_TRUE(linear_factor_scan(*f, PolyBi({{2, 0, 1}, {0, 2, 1}})).empty());
  EXPECT_EQ(linear_factor_scan(*f, PolyBi({{2, 0, 1}, {0, 2, 6}})), (std::vector<LinearForm>{{1, 1, 0}, {1, 6, 0}}));
  EXPECT_EQ(code_of([&] { linear_factor_scan(*f, PolyBi{}); }), ErrorCode::ZeroPolynomial);
}

TEST(LinearFactors, MatchesVanishingOnLines) {
  // For deg P < q, a form divides P exactly when P vanishes on its whole line.
  std::mt19937_64 rng(45);
  const auto f = build_field(7, 1);
  for (int t = 0; t < 40; ++t) {
    std::vector<Monomial> terms;
    for (unsigned i = 0; i <= 3; ++i) {
      for (unsigned j = 0; i + j <= 3; ++j) {
        if (rng() % 3 == 0) terms.push_back({i, j, static_cast<Elem>(1 + rng() % 6)});
      }
    }
    if (terms.empty()) continue;
    PolyBi poly(terms);
    if (t % 2 == 0) {
      // Multiply by a random linear form to guarantee at least one factor.
      const Elem b = rng() % 7, c = rng() % 7;
      std::vector<Monomial> prod;
      for (const auto& m : poly.terms) {
        prod.push_back({m.i + 1, m.j, m.c});
        prod.push_back({m.i, m.j + 1, f->mul(m.c, b)});
        prod.push_back({m.i, m.j, f->mul(m.c, c)});
      }
      std::vector<Monomial> merged;
      std::sort(prod.begin(), prod.end(), [](auto& l, auto& r) { return std::pair{l.i, l.j} < std::pair{r.i, r.j}; });
      for (const auto& m : prod) {
        if (!merged.empty() && merged.back().i == m.i && merged.back().j == m.j) {
          merged.back().c = f->add(merged.back().c, m.c);
        } else {
          merged.push_back(m);
        }
      }
      std::erase_if(merged, [](auto& m) { return m.c == 0; });
      poly = PolyBi(merged);
      if (poly.is_zero() || poly.degree() >= 7) continue;
    }
    std::vector<LinearForm> ref;
    for (Elem beta = 0; beta < 7; ++beta) {
      for (Elem gamma = 0; gamma < 7; ++gamma) {
        bool all = true;
        for (Elem y = 0; y < 7 && all; ++y) all = eval(*f, poly, f->neg(f->add(f->mul(beta, y), gamma)), y) == 0;
        if (all) ref.push_back({1, beta, gamma});
      }
    }
    for (Elem gamma = 0; gamma < 7; ++gamma) {
      bool all = true;
      for (Elem x = 0; x < 7 && all; ++x) all = eval(*f, poly, x, f->neg(gamma)) == 0;
      if (all) ref.push_back({0, 1, gamma});
    }
    EXPECT_EQ(linear_factor_scan(*f, poly), ref);
    if (t % 2 == 0) {
      EXPECT_FALSE(ref.empty());
    }
  }
}

TEST(Degeneracy, Detection) {
  const auto f = build_field(7, 1);
  EXPECT_TRUE(is_degenerate(*f, PolyBi({{1, 0, 1}, {0, 1, 1}})));
  // (x + 2y)^2 + 3(x + 2y) = x^2 + 4xy + 4y^2 + 3x + 6y
  EXPECT_TRUE(is_degenerate(*f, PolyBi({{2, 0, 1}, {1, 1, 4}, {0, 2, 4}, {1, 0, 3}, {0, 1, 6}})));
  EXPECT_TRUE(is_degenerate(*f, PolyBi({{0, 3, 2}})));
  EXPECT_FALSE(is_degenerate(*f, PolyBi({{2, 0, 1}, {0, 2, 1}})));
  EXPECT_FALSE(is_degenerate(*f, PolyBi({{1, 1, 1}})));
  EXPECT_EQ(code_of([&] { is_degenerate(*f, PolyBi({{7, 0, 1}})); }), ErrorCode::PreconditionViolated);
}

TEST(BadSet, Examples) {
  const auto f5 = build_field(5, 1);
  const auto r = bad_set_delta(*f5, PolyBi({{2, 0, 1}, {1, 1, 1}}));
  EXPECT_EQ(r.delta, (ElemSet{0}));  // x(x + y)
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(code_of([&] { bad_set_delta(*f5, PolyBi({{1, 0, 1}, {0, 1, 1}})); }), ErrorCode::DegeneracyDetected);
  const auto f7 = build_field(7, 1);
  const auto circle = bad_set_delta(*f7, PolyBi({{2, 0, 1}, {0, 2, 1}}));
  EXPECT_LE(circle.delta.size(), 1u);
  EXPECT_TRUE(circle.pass);
}

TEST(BadSet, ScanAgreesWithFactorScan) {
  std::mt19937_64 rng(46);
  for (std::uint32_t p : {5u, 7u}) {
    const auto f = build_field(p, 1);
    for (int t = 0; t < 150; ++t) {
      std::vector<Monomial> terms;
      for (unsigned i = 0; i <= 3; ++i) {
        for (unsigned j = 0; i + j <= 3; ++j) {
          if (rng() % 3 == 0) terms.push_back({i, j, static_cast<Elem>(1 + rng() % (p - 1))});
        }
      }
      const PolyBi poly(terms);
      if (poly.degree() < 1) continue;
      const auto scan = scan_lines(*f, evaluation_table(*f, poly));
      EXPECT_EQ(scan.degenerate, is_degenerate(*f, poly));
      if (scan.degenerate) continue;
      const auto r = bad_set_delta(*f, poly);
      EXPECT_EQ(scan.delta, r.delta);
      EXPECT_TRUE(r.pass);
    }
  }
}

TEST(GaraevChang, SmallPrimeMatchesDirectConstruction) {
  const auto f = build_field(1009, 1);
  const auto g = garaev_chang_construct(*f, 10);
  EXPECT_EQ(g.m, 200u);
  ASSERT_FALSE(g.a.empty());
  EXPECT_TRUE(g.pass);
  EXPECT_LE(g.sumset_size, 400u);

  std::vector<int> in_x(1009, 0);
  std::size_t xs = 0;
  for (std::uint64_t x = 1; x < 1009; ++x) {
    const auto r = x * x % 1009;
    if (r >= 1 && r <= 200) in_x[x] = 1, ++xs;
  }
  EXPECT_EQ(g.x_size, xs);
  std::size_t best = 0, best_l = 0;
  for (std::size_t l = 0; l + 200 <= 1008; ++l) {
    std::size_t c = 0;
    for (std::size_t x = l + 1; x <= l + 200; ++x) c += in_x[x];
    if (c > best) best = c, best_l = l;
  }
  EXPECT_EQ(g.window, best_l);
  EXPECT_EQ(g.a.size(), best);
  std::set<Elem> s;
  for (auto a : g.a) {
    for (auto b : g.a) s.insert(static_cast<Elem>((a + b * b) % 1009));
  }
  EXPECT_EQ(g.sumset_size, s.size());
}

TEST(GaraevChang, Preconditions) {
  EXPECT_EQ(code_of([] { garaev_chang_construct(*build_field(101, 1), 2); }), ErrorCode::PreconditionViolated);
  EXPECT_EQ(code_of([] { garaev_chang_construct(*build_field(1009, 1), 0); }), ErrorCode::PreconditionViolated);
  EXPECT_EQ(code_of([] { garaev_chang_construct(*build_field(3, 7), 1); }), ErrorCode::PreconditionViolated);
}

TEST(PrRuzsa, Examples) {
  const auto f = build_field(1009, 1);
  ElemSet ap;
  for (Elem i = 1; i <= 10; ++i) ap.push_back(i);
  EXPECT_TRUE(pr_ruzsa_checks(*f, ap).pass());
  const auto one = pr_ruzsa_checks(*f, ElemSet{17});
  EXPECT_TRUE(one.pass());
  EXPECT_EQ(one.a_plus_a_sq, 1u);
  EXPECT_EQ(code_of([&] { pr_ruzsa_checks(*f, ElemSet{}); }), ErrorCode::EmptySet);

  std::mt19937_64 rng(47);
  for (std::uint32_t p : {101u, 1009u}) {
    const auto fp = build_field(p, 1);
    for (int t = 0; t < 200; ++t) {
      const auto a = random_elems(*fp, rng, 4 + uniform_below(rng, 37), false);
      const auto r = pr_ruzsa_checks(*fp, a);
      EXPECT_TRUE(r.pass());
      EXPECT_EQ(r.a_plus_a, op_set(*fp, a, a, SetOp::Add).size());
    }
  }
}
