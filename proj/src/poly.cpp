#include "fflab/poly.hpp"

#include <algorithm>
#include <map>

namespace fflab {

namespace {

void trim(std::vector<Elem>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

}  // namespace

PolyUni::PolyUni(std::vector<Elem> c) : coeffs(std::move(c)) { trim(coeffs); }

PolyUni poly_x() { return PolyUni({0, 1}); }
PolyUni poly_const(Elem c) { return PolyUni({c}); }

Elem eval(const FieldCtx& f, const PolyUni& a, Elem x) {
  Elem acc = 0;
  for (std::size_t i = a.coeffs.size(); i-- > 0;) acc = f.add(f.mul(acc, x), a.coeffs[i]);
  return acc;
}

PolyUni add(const FieldCtx& f, const PolyUni& a, const PolyUni& b) {
  std::vector<Elem> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.add(a.coeff(i), b.coeff(i));
  return PolyUni(std::move(c));
}

PolyUni sub(const FieldCtx& f, const PolyUni& a, const PolyUni& b) {
  std::vector<Elem> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.sub(a.coeff(i), b.coeff(i));
  return PolyUni(std::move(c));
}

PolyUni mul(const FieldCtx& f, const PolyUni& a, const PolyUni& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Elem> c(a.coeffs.size() + b.coeffs.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) {
      c[i + j] = f.add(c[i + j], f.mul(a.coeffs[i], b.coeffs[j]));
    }
  }
  return PolyUni(std::move(c));
}

PolyUni scale(const FieldCtx& f, const PolyUni& a, Elem s) {
  std::vector<Elem> c(a.coeffs.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.mul(a.coeffs[i], s);
  return PolyUni(std::move(c));
}

PolyUni derivative(const FieldCtx& f, const PolyUni& a) {
  if (a.coeffs.size() < 2) return {};
  std::vector<Elem> c(a.coeffs.size() - 1);
  for (std::size_t i = 1; i < a.coeffs.size(); ++i) {
    c[i - 1] = f.mul(a.coeffs[i], static_cast<Elem>(i % f.p()));
  }
  return PolyUni(std::move(c));
}

std::pair<PolyUni, PolyUni> divmod(const FieldCtx& f, const PolyUni& a, const PolyUni& b) {
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
  std::vector<Elem> r = a.coeffs;
  const std::size_t db = b.coeffs.size() - 1;
  if (r.size() <= db) return {PolyUni{}, a};
  std::vector<Elem> qc(r.size() - db, 0);
  const Elem lead_inv = f.inv(b.lead());
  for (std::size_t top = r.size(); top-- > db;) {
    const Elem c = f.mul(r[top], lead_inv);
    if (c == 0) continue;
    const std::size_t shift = top - db;
    qc[shift] = c;
    for (std::size_t i = 0; i <= db; ++i) r[shift + i] = f.sub(r[shift + i], f.mul(c, b.coeffs[i]));
  }
  return {PolyUni(std::move(qc)), PolyUni(std::move(r))};
}

PolyUni powmod(const FieldCtx& f, PolyUni base, std::uint64_t e, const PolyUni& m) {
  PolyUni r = divmod(f, poly_const(1), m).second;
  base = divmod(f, base, m).second;
  for (; e > 0; e >>= 1) {
    if (e & 1) r = divmod(f, mul(f, r, base), m).second;
    base = divmod(f, mul(f, base, base), m).second;
  }
  return r;
}

PolyUni monic(const FieldCtx& f, const PolyUni& a) {
  if (a.is_zero()) return a;
  return scale(f, a, f.inv(a.lead()));
}

PolyUni gcd(const FieldCtx& f, PolyUni a, PolyUni b) {
  while (!b.is_zero()) {
    std::vector<Elem> r = divmod(f, a, b).second.coeffs;
    a = std::move(b);
    b = PolyUni(std::move(r));
  }
  return monic(f, a);
}

bool is_irreducible(const FieldCtx& f, const PolyUni& a) {
  const int n = a.degree();
  if (n < 1) return false;
  if (n == 1) return true;
  const PolyUni x = poly_x();
  std::vector<PolyUni> frob(n + 1);
  frob[0] = divmod(f, x, a).second;
  for (int i = 1; i <= n; ++i) frob[i] = powmod(f, frob[i - 1], f.q(), a);
  if (!(frob[n] == frob[0])) return false;
  for (const auto r : prime_factors(static_cast<std::uint64_t>(n))) {
    if (gcd(f, a, sub(f, frob[n / r], x)).degree() != 0) return false;
  }
  return true;
}

PolyUni expand(const FieldCtx& f, const Factorization& fac) {
  PolyUni acc = poly_const(fac.unit);
  for (const auto& factor : fac.factors) {
    for (unsigned e = 0; e < factor.exponent; ++e) acc = mul(f, acc, factor.poly);
  }
  return acc;
}

PolyUni with_factorization(const FieldCtx& f, PolyUni a, Factorization fac) {
  if (fac.unit == 0) throw Error(ErrorCode::PreconditionViolated, "factorization unit is zero");
  for (std::size_t i = 0; i < fac.factors.size(); ++i) {
    const auto& fi = fac.factors[i];
    if (fi.exponent == 0) throw Error(ErrorCode::PreconditionViolated, "factor exponent must be positive");
    if (fi.poly.lead() != 1) throw Error(ErrorCode::PreconditionViolated, "factors must be monic");
    if (!is_irreducible(f, fi.poly)) throw Error(ErrorCode::PreconditionViolated, "listed factor is reducible");
    for (std::size_t j = 0; j < i; ++j) {
      if (fac.factors[j].poly == fi.poly) throw Error(ErrorCode::PreconditionViolated, "repeated factor");
    }
  }
  if (!(expand(f, fac) == a)) {
    throw Error(ErrorCode::PreconditionViolated, "factored form does not expand to the coefficients");
  }
  a.factored = std::move(fac);
  return a;
}

std::size_t distinct_root_count(const Factorization& fac) {
  std::size_t d = 0;
  for (const auto& factor : fac.factors) d += static_cast<std::size_t>(factor.poly.degree());
  return d;
}

std::string coeff_string(const std::vector<Elem>& coeffs) {
  if (coeffs.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(coeffs[i]);
  }
  return s;
}

PolyBi::PolyBi(std::vector<Monomial> t) {
  std::map<std::pair<unsigned, unsigned>, Elem> merged;
  for (const auto& m : t) {
    if (m.c != 0) merged[{m.i, m.j}] = m.c;  // later duplicates overwrite
  }
  for (const auto& [ij, c] : merged) terms.push_back({ij.first, ij.second, c});
}

int PolyBi::degree() const {
  int d = -1;
  for (const auto& m : terms) d = std::max(d, static_cast<int>(m.i + m.j));
  return d;
}

Elem PolyBi::coeff(unsigned i, unsigned j) const {
  for (const auto& m : terms) {
    if (m.i == i && m.j == j) return m.c;
  }
  return 0;
}

Elem eval(const FieldCtx& f, const PolyBi& a, Elem x, Elem y) {
  Elem acc = 0;
  for (const auto& m : a.terms) acc = f.add(acc, f.mul(m.c, f.mul(f.pow(x, m.i), f.pow(y, m.j))));
  return acc;
}

PolyBi add_const(const FieldCtx& f, const PolyBi& a, Elem c) {
  std::vector<Monomial> t = a.terms;
  bool found = false;
  for (auto& m : t) {
    if (m.i == 0 && m.j == 0) {
      m.c = f.add(m.c, c);
      found = true;
    }
  }
  if (!found) t.push_back({0, 0, c});
  return PolyBi(std::move(t));
}

PolyBi sub_const(const FieldCtx& f, const PolyBi& a, Elem c) { return add_const(f, a, f.neg(c)); }

PolyBi scale(const FieldCtx& f, const PolyBi& a, Elem c) {
  std::vector<Monomial> t = a.terms;
  for (auto& m : t) m.c = f.mul(m.c, c);
  return PolyBi(std::move(t));
}

PolyUni restrict_to_line(const FieldCtx& f, const PolyBi& a, Elem x0, Elem dx, Elem y0, Elem dy) {
  const int k = std::max(a.degree(), 0);
  std::vector<PolyUni> xp(k + 1), yp(k + 1);
  const PolyUni lx({x0, dx}), ly({y0, dy});
  xp[0] = yp[0] = poly_const(1);
  for (int e = 1; e <= k; ++e) {
    xp[e] = mul(f, xp[e - 1], lx);
    yp[e] = mul(f, yp[e - 1], ly);
  }
  PolyUni acc;
  for (const auto& m : a.terms) acc = add(f, acc, scale(f, mul(f, xp[m.i], yp[m.j]), m.c));
  return acc;
}

std::string term_string(const PolyBi& a) {
  std::string s;
  for (std::size_t n = 0; n < a.terms.size(); ++n) {
    if (n) s += ';';
    const auto& m = a.terms[n];
    s += std::to_string(m.i) + ':' + std::to_string(m.j) + ':' + std::to_string(m.c);
  }
  return s;
}

}  // namespace fflab
