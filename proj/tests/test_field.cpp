#include <gtest/gtest.h>

#include <random>

#include "fflab/field.hpp"
#include "oracle.hpp"

using namespace fflab;

TEST(FieldCore, PrimeFieldHasIdentityTrace) {
  const auto f = build_field(7, 1);
  EXPECT_EQ(f->q(), 7u);
  EXPECT_EQ(f->modulus(), (std::vector<Elem>{0, 1}));
  for (Elem c = 0; c < 7; ++c) EXPECT_EQ(f->trace(c), c);
  EXPECT_EQ(f->trace(4), 4u);
}

TEST(FieldCore, DefaultQuadraticModulusForF9) {
  const auto f = build_field(3, 2);
  // candidates are scanned in base-3 order of their low coefficients
  EXPECT_EQ(f->modulus(), (std::vector<Elem>{1, 0, 1}));
  EXPECT_EQ(f->q(), 9u);
  EXPECT_EQ(f->pow(f->gen(), 8), 1u);
  for (std::uint64_t e = 1; e < 8; ++e) EXPECT_NE(f->pow(f->gen(), e), 1u);
}

TEST(FieldCore, F9ArithmeticMatchesPolynomialReduction) {
  const auto f = build_field(3, 2, std::vector<Elem>{1, 0, 1});
  const Elem t = 3;  // digits (0, 1)
  EXPECT_EQ(f->mul(t, t), 2u);
  EXPECT_EQ(f->trace(1), 2u);
  EXPECT_EQ(f->trace(0), 0u);
  EXPECT_EQ(f->trace(t), 0u);
  for (Elem a = 0; a < 9; ++a) {
    for (Elem b = 0; b < 9; ++b) {
      const auto expect = oracle::index_of(
          oracle::poly_mulmod(oracle::digits_of(a, 3, 2), oracle::digits_of(b, 3, 2), {1, 0, 1}, 3), 3);
      EXPECT_EQ(f->mul(a, b), expect) << a << "*" << b;
    }
  }
}

TEST(FieldCore, SmallPrimeArithmetic) {
  const auto f = build_field(7, 1);
  EXPECT_EQ(f->mul(3, 5), 1u);
  EXPECT_EQ(f->inv(3), 5u);
  EXPECT_EQ(f->arith(FieldOp::Div, 1, 3), 5u);
  EXPECT_EQ(f->arith(FieldOp::Pow, 3, 6), 1u);
  EXPECT_EQ(f->arith(FieldOp::Neg, 3), 4u);
  EXPECT_EQ(f->arith(FieldOp::Sub, 2, 5), 4u);
}

TEST(FieldCore, PrimitiveElementIsSmallestGenerator) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u, 101u, 1009u}) {
    const auto f = build_field(p, 1);
    EXPECT_EQ(f->gen(), oracle::smallest_generator(p)) << p;
  }
  EXPECT_EQ(build_field(7, 1)->gen(), 3u);
  EXPECT_EQ(build_field(5, 1)->gen(), 2u);
}

TEST(FieldCore, DiscreteLogBasics) {
  for (auto [p, k] : {std::pair{5u, 1u}, {3u, 2u}, {2u, 4u}, {5u, 2u}}) {
    const auto f = build_field(p, k);
    EXPECT_EQ(f->dlog(f->gen()), f->q() > 2 ? 1u : 0u);
    EXPECT_EQ(f->dlog(1), 0u);
  }
}

TEST(FieldCore, Errors) {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  EXPECT_EQ(code_of([] { build_field(9, 1); }), ErrorCode::NotPrime);
  EXPECT_EQ(code_of([] { build_field(3, 2, std::vector<Elem>{1, 2, 1}); }), ErrorCode::NotIrreducible);
  EXPECT_EQ(code_of([] { build_field(2, 21); }), ErrorCode::CapExceeded);
  EXPECT_EQ(code_of([] { build_field(1048583, 1); }), ErrorCode::CapExceeded);
  EXPECT_EQ(code_of([] { build_field(7, 1)->inv(0); }), ErrorCode::DivisionByZero);
  EXPECT_EQ(code_of([] { build_field(7, 1)->div(3, 0); }), ErrorCode::DivisionByZero);
}

TEST(FieldCore, IrreducibilityTestAgainstRootCounting) {
  // Degree <= 3 over F_p: irreducible iff no root.
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (std::uint32_t deg : {2u, 3u}) {
      std::uint32_t count = 1;
      for (std::uint32_t i = 0; i < deg; ++i) count *= p;
      for (std::uint32_t n = 0; n < count; ++n) {
        std::vector<std::uint32_t> poly = oracle::digits_of(n, p, deg);
        poly.push_back(1);
        bool has_root = false;
        for (std::uint64_t x = 0; x < p; ++x) {
          std::uint64_t v = 0;
          for (std::size_t i = poly.size(); i-- > 0;) v = (v * x + poly[i]) % p;
          has_root = has_root || v == 0;
        }
        EXPECT_EQ(is_irreducible_mod_p(poly, p), !has_root) << p << " " << n;
      }
    }
  }
  // x^4 + x^2 + 1 = (x^2 + x + 1)^2 over F_2 has no root but is reducible.
  EXPECT_FALSE(is_irreducible_mod_p(std::vector<std::uint32_t>{1, 0, 1, 0, 1}, 2));
  EXPECT_TRUE(is_irreducible_mod_p(std::vector<std::uint32_t>{1, 1, 0, 0, 1}, 2));
}

class FieldProperties : public ::testing::TestWithParam<std::pair<std::uint32_t, std::uint32_t>> {};

TEST_P(FieldProperties, AxiomsTraceFrobeniusAndLogs) {
  const auto [p, k] = GetParam();
  const auto f = build_field(p, k);
  const Elem q = f->q();
  std::mt19937 rng(1234 + p * 31 + k);
  std::uniform_int_distribution<Elem> pick(0, q - 1);

  for (int s = 0; s < 300; ++s) {
    const Elem a = pick(rng), b = pick(rng), c = pick(rng);
    EXPECT_EQ(f->add(f->add(a, b), c), f->add(a, f->add(b, c)));
    EXPECT_EQ(f->mul(f->mul(a, b), c), f->mul(a, f->mul(b, c)));
    EXPECT_EQ(f->mul(a, f->add(b, c)), f->add(f->mul(a, b), f->mul(a, c)));
    EXPECT_EQ(f->add(a, f->neg(a)), 0u);
    if (a != 0) {
      EXPECT_EQ(f->mul(a, f->inv(a)), 1u);
    }
    // Frobenius is additive.
    EXPECT_EQ(f->pow(f->add(a, b), p), f->add(f->pow(a, p), f->pow(b, p)));
    // Trace is F_p-valued, fixed by Frobenius and additive.
    EXPECT_LT(f->trace(a), p);
    EXPECT_EQ(f->pow(f->trace(a), p), f->trace(a));
    EXPECT_EQ(f->trace(f->add(a, b)), (f->trace(a) + f->trace(b)) % p);
    EXPECT_EQ(f->trace(a), oracle::trace(a, p, f->modulus()));
  }

  // g^(q-1) = 1 and g^((q-1)/r) != 1 for every prime r | q-1.
  EXPECT_EQ(f->pow(f->gen(), q - 1), 1u);
  for (const auto r : prime_factors(q - 1)) EXPECT_NE(f->pow(f->gen(), (q - 1) / r), 1u);
  // dlog inverts m -> g^m.
  for (std::uint32_t m = 0; m + 1 < q; ++m) EXPECT_EQ(f->dlog(f->exp(m)), m);

  // Deterministic construction.
  EXPECT_TRUE(*f == *build_field(p, k));
}

INSTANTIATE_TEST_SUITE_P(SmallFields, FieldProperties,
                         ::testing::Values(std::pair{2u, 1u}, std::pair{2u, 3u}, std::pair{2u, 4u}, std::pair{3u, 2u},
                                           std::pair{3u, 3u}, std::pair{5u, 2u}, std::pair{7u, 1u}, std::pair{7u, 2u},
                                           std::pair{11u, 1u}, std::pair{13u, 1u}));
