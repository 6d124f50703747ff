#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fflab/field.hpp"

namespace fflab {

struct PolyUni;

struct Factor;

/// unit * prod(factor.poly ^ factor.exponent), factors monic, irreducible and pairwise distinct.
struct Factorization {
  Elem unit = 1;
  std::vector<Factor> factors;
};

/// Univariate polynomial over F_q, coefficients low to high with no trailing zeros.
struct PolyUni {
  std::vector<Elem> coeffs;
  std::optional<Factorization> factored;

  PolyUni() = default;
  explicit PolyUni(std::vector<Elem> c);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const { return coeffs.empty(); }
  Elem lead() const { return coeffs.empty() ? 0 : coeffs.back(); }
  Elem coeff(std::size_t i) const { return i < coeffs.size() ? coeffs[i] : 0; }

  bool operator==(const PolyUni& o) const { return coeffs == o.coeffs; }
};

struct Factor {
  PolyUni poly;
  unsigned exponent = 1;
};

PolyUni poly_x();
PolyUni poly_const(Elem c);

Elem eval(const FieldCtx& f, const PolyUni& a, Elem x);
PolyUni add(const FieldCtx& f, const PolyUni& a, const PolyUni& b);
PolyUni sub(const FieldCtx& f, const PolyUni& a, const PolyUni& b);
PolyUni mul(const FieldCtx& f, const PolyUni& a, const PolyUni& b);
PolyUni scale(const FieldCtx& f, const PolyUni& a, Elem c);
PolyUni derivative(const FieldCtx& f, const PolyUni& a);
/// Quotient and remainder; throws DivisionByZero for a zero divisor.
std::pair<PolyUni, PolyUni> divmod(const FieldCtx& f, const PolyUni& a, const PolyUni& b);
PolyUni powmod(const FieldCtx& f, PolyUni base, std::uint64_t e, const PolyUni& m);
/// Monic gcd (zero if both inputs are zero).
PolyUni gcd(const FieldCtx& f, PolyUni a, PolyUni b);
PolyUni monic(const FieldCtx& f, const PolyUni& a);

/// Irreducibility over F_q (Rabin's test).
bool is_irreducible(const FieldCtx& f, const PolyUni& a);

PolyUni expand(const FieldCtx& f, const Factorization& fac);

/// Attaches a factored form after checking that every factor is monic,
/// irreducible and distinct, and that the product equals the coefficients.
/// Throws PreconditionViolated otherwise.
PolyUni with_factorization(const FieldCtx& f, PolyUni a, Factorization fac);

/// Number of distinct roots in the splitting field: the sum of the degrees of
/// the distinct irreducible factors.
std::size_t distinct_root_count(const Factorization& fac);

/// Semicolon-joined coefficient indices, low to high ("0" for the zero polynomial).
std::string coeff_string(const std::vector<Elem>& coeffs);

struct Monomial {
  unsigned i = 0;  // power of x
  unsigned j = 0;  // power of y
  Elem c = 0;
  auto operator<=>(const Monomial&) const = default;
};

/// Bivariate polynomial over F_q stored as sorted nonzero monomials.
struct PolyBi {
  std::vector<Monomial> terms;

  PolyBi() = default;
  explicit PolyBi(std::vector<Monomial> t);

  bool is_zero() const { return terms.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  Elem coeff(unsigned i, unsigned j) const;

  bool operator==(const PolyBi& o) const { return terms == o.terms; }
};

Elem eval(const FieldCtx& f, const PolyBi& a, Elem x, Elem y);
PolyBi add_const(const FieldCtx& f, const PolyBi& a, Elem c);
PolyBi sub_const(const FieldCtx& f, const PolyBi& a, Elem c);
PolyBi scale(const FieldCtx& f, const PolyBi& a, Elem c);

/// P(x0 + dx*t, y0 + dy*t) as a polynomial in t.
PolyUni restrict_to_line(const FieldCtx& f, const PolyBi& a, Elem x0, Elem dx, Elem y0, Elem dy);

/// "i:j:c" triples joined by ';'.
std::string term_string(const PolyBi& a);

}  // namespace fflab
