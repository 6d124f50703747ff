#include "fflab/field.hpp"

#include <algorithm>
#include <string>

namespace fflab {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

namespace {

// Dense polynomials over F_p, coefficients low to high, no trailing zeros.
using PolyP = std::vector<std::uint32_t>;

void trim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  // a^(p-2) mod p
  std::uint64_t r = 1, b = a % p;
  for (std::uint64_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return static_cast<std::uint32_t>(r);
}

PolyP poly_mod(PolyP a, const PolyP& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = inv_mod(m.back(), p);
  while (a.size() > dm) {
    const std::size_t shift = a.size() - 1 - dm;
    const std::uint64_t c = a.back() * lead_inv % p;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * m[i]) % p);
    }
    trim(a);
  }
  return a;
}

PolyP poly_mulmod(const PolyP& a, const PolyP& b, const PolyP& m, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  PolyP r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t{a[i]} * b[j]) % p);
    }
  }
  return poly_mod(std::move(r), m, p);
}

PolyP poly_powmod(PolyP base, std::uint64_t e, const PolyP& m, std::uint32_t p) {
  PolyP r{1};
  base = poly_mod(std::move(base), m, p);
  for (; e > 0; e >>= 1) {
    if (e & 1) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
  }
  return r;
}

PolyP poly_gcd(PolyP a, PolyP b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyP r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

PolyP poly_sub(PolyP a, const PolyP& b, std::uint32_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

}  // namespace

bool is_irreducible_mod_p(std::span<const std::uint32_t> poly, std::uint32_t p) {
  PolyP f(poly.begin(), poly.end());
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t n = f.size() - 1;
  if (n == 1) return true;
  const PolyP x{0, 1};
  // x^(p^n) == x (mod f), and gcd(x^(p^(n/r)) - x, f) == 1 for primes r | n.
  std::vector<PolyP> frob(n + 1);
  frob[0] = poly_mod(x, f, p);
  for (std::size_t i = 1; i <= n; ++i) frob[i] = poly_powmod(frob[i - 1], p, f, p);
  if (poly_sub(frob[n], frob[0], p).size() != 0) return false;
  for (const auto r : prime_factors(n)) {
    const PolyP g = poly_gcd(f, poly_sub(frob[n / r], x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

Elem FieldCtx::add_digits(Elem a, Elem b) const {
  Elem out = 0, place = 1;
  while (a != 0 || b != 0) {
    std::uint32_t d = a % p_ + b % p_;
    if (d >= p_) d -= p_;
    out += d * place;
    place *= p_;
    a /= p_;
    b /= p_;
  }
  return out;
}

Elem FieldCtx::neg_digits(Elem a) const {
  Elem out = 0, place = 1;
  while (a != 0) {
    const std::uint32_t d = a % p_;
    out += (d == 0 ? 0 : p_ - d) * place;
    place *= p_;
    a /= p_;
  }
  return out;
}

Elem FieldCtx::inv(Elem a) const {
  if (a == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  if (k_ == 1) return inv_mod(a, p_);
  const std::uint32_t l = log_[a];
  return exp_[l == 0 ? 0 : q_ - 1 - l];
}

Elem FieldCtx::pow(Elem a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  const std::uint64_t l = std::uint64_t{log_[a]} * (e % (q_ - 1)) % (q_ - 1);
  return exp_[l];
}

Elem FieldCtx::arith(FieldOp op, Elem a, std::uint64_t b) const {
  switch (op) {
    case FieldOp::Add: return add(a, static_cast<Elem>(b));
    case FieldOp::Sub: return sub(a, static_cast<Elem>(b));
    case FieldOp::Mul: return mul(a, static_cast<Elem>(b));
    case FieldOp::Div: return div(a, static_cast<Elem>(b));
    case FieldOp::Neg: return neg(a);
    case FieldOp::Inv: return inv(a);
    case FieldOp::Pow: return pow(a, b);
  }
  return 0;
}

std::uint32_t FieldCtx::dlog(Elem x) const {
  if (x == 0 || x >= q_) throw Error(ErrorCode::PointOutsideCarrier, "dlog of zero");
  return log_[x];
}

std::vector<std::uint32_t> FieldCtx::digits(Elem a) const {
  std::vector<std::uint32_t> d(k_, 0);
  for (std::uint32_t i = 0; i < k_; ++i) {
    d[i] = a % p_;
    a /= p_;
  }
  return d;
}

Elem FieldCtx::from_digits(std::span<const std::uint32_t> digits) const {
  Elem out = 0;
  for (std::size_t i = digits.size(); i-- > 0;) out = out * p_ + digits[i] % p_;
  return out;
}

bool FieldCtx::operator==(const FieldCtx& o) const {
  return p_ == o.p_ && k_ == o.k_ && modulus_ == o.modulus_ && gen_ == o.gen_ && exp_ == o.exp_ &&
         log_ == o.log_ && trace_ == o.trace_;
}

FieldPtr build_field(std::uint32_t p, std::uint32_t k, std::optional<std::vector<Elem>> modulus,
                     std::uint64_t cap) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  if (k < 1) throw Error(ErrorCode::PreconditionViolated, "extension degree must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    q *= p;
    if (q > cap) {
      throw Error(ErrorCode::CapExceeded,
                  std::to_string(p) + "^" + std::to_string(k) + " exceeds cap " + std::to_string(cap));
    }
  }

  PolyP m;
  if (modulus) {
    m = *modulus;
    if (m.size() != k + 1 || m.back() != 1 ||
        std::any_of(m.begin(), m.end(), [p](std::uint32_t c) { return c >= p; })) {
      throw Error(ErrorCode::PreconditionViolated, "modulus must be monic of degree k with coefficients < p");
    }
    if (!is_irreducible_mod_p(m, p)) throw Error(ErrorCode::NotIrreducible, "modulus is reducible over F_p");
  } else if (k == 1) {
    m = {0, 1};
  } else {
    m.assign(k + 1, 0);
    m[k] = 1;
    bool found = false;
    for (std::uint64_t n = 0; n < q && !found; ++n) {
      std::uint64_t v = n;
      for (std::uint32_t i = 0; i < k; ++i) {
        m[i] = static_cast<std::uint32_t>(v % p);
        v /= p;
      }
      found = is_irreducible_mod_p(m, p);
    }
    // An irreducible of every degree exists, so the scan always succeeds.
  }

  auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
  ctx->p_ = p;
  ctx->k_ = k;
  ctx->q_ = static_cast<std::uint32_t>(q);
  ctx->modulus_ = m;
  const std::uint32_t qq = ctx->q_;
  const std::uint64_t order = q - 1;

  // Multiplication before tables exist.
  auto to_poly = [&](Elem a) {
    PolyP d(k, 0);
    for (std::uint32_t i = 0; i < k; ++i) {
      d[i] = a % p;
      a /= p;
    }
    trim(d);
    return d;
  };
  auto from_poly = [&](const PolyP& d) {
    Elem out = 0;
    for (std::size_t i = d.size(); i-- > 0;) out = out * p + d[i];
    return out;
  };
  auto slow_mul = [&](Elem a, Elem b) -> Elem {
    if (k == 1) return static_cast<Elem>(std::uint64_t{a} * b % p);
    return from_poly(poly_mulmod(to_poly(a), to_poly(b), m, p));
  };
  auto slow_pow = [&](Elem a, std::uint64_t e) {
    Elem r = 1;
    for (; e > 0; e >>= 1) {
      if (e & 1) r = slow_mul(r, a);
      a = slow_mul(a, a);
    }
    return r;
  };

  const auto factors = prime_factors(order);
  Elem g = 1;
  for (Elem cand = 1; cand < qq; ++cand) {
    const bool generator = std::all_of(factors.begin(), factors.end(),
                                       [&](std::uint64_t r) { return slow_pow(cand, order / r) != 1; });
    if (generator) {
      g = cand;
      break;
    }
  }
  ctx->gen_ = g;

  ctx->exp_.resize(order);
  ctx->log_.assign(qq, 0);
  Elem cur = 1;
  for (std::uint32_t e = 0; e < order; ++e) {
    ctx->exp_[e] = cur;
    ctx->log_[cur] = e;
    cur = slow_mul(cur, g);
  }

  ctx->trace_.assign(qq, 0);
  for (Elem c = 1; c < qq; ++c) {
    Elem acc = 0;
    std::uint64_t e = ctx->log_[c];
    for (std::uint32_t i = 0; i < k; ++i) {
      acc = ctx->add(acc, ctx->exp_[e]);
      e = e * p % order;
    }
    ctx->trace_[c] = acc;  // in the prime subfield, so acc < p
  }
  return ctx;
}

}  // namespace fflab
