#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fflab/error.hpp"

namespace fflab {

/// Canonical index of an element of F_q = F_{p^k}: the integer whose base-p
/// digits are the coefficients (low to high) of the representing polynomial.
/// Index 0 is the additive identity and index 1 the multiplicative identity.
using Elem = std::uint32_t;

inline constexpr std::uint64_t kDefaultFieldCap = std::uint64_t{1} << 20;

enum class FieldOp { Add, Sub, Mul, Div, Neg, Inv, Pow };

bool is_prime(std::uint64_t n);

/// Distinct prime divisors of n in increasing order.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// Immutable description of F_q with precomputed discrete-log, antilog and
/// absolute-trace tables. Shared read-only between threads.
class FieldCtx {
 public:
  std::uint32_t p() const { return p_; }
  std::uint32_t k() const { return k_; }
  std::uint32_t q() const { return q_; }
  /// Monic modulus, coefficients low to high (size k + 1).
  const std::vector<Elem>& modulus() const { return modulus_; }
  Elem gen() const { return gen_; }

  Elem add(Elem a, Elem b) const {
    if (k_ == 1) {
      const std::uint32_t s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    return add_digits(a, b);
  }
  Elem neg(Elem a) const {
    if (k_ == 1) return a == 0 ? 0 : p_ - a;
    return neg_digits(a);
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    if (k_ == 1) return static_cast<Elem>(std::uint64_t{a} * b % p_);
    std::uint32_t e = log_[a] + log_[b];
    if (e >= q_ - 1) e -= q_ - 1;
    return exp_[e];
  }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const;

  /// Generic dispatch; for Pow the second operand is the exponent.
  Elem arith(FieldOp op, Elem a, std::uint64_t b = 0) const;

  /// Absolute trace, returned as an element of the prime subfield (< p).
  std::uint32_t trace(Elem c) const { return trace_[c]; }
  /// Discrete log base gen(); requires x != 0.
  std::uint32_t dlog(Elem x) const;
  /// gen()^m for m in [0, q-1).
  Elem exp(std::uint32_t m) const { return exp_[m]; }

  /// Base-p digits (polynomial coefficients) of an element, low to high.
  std::vector<std::uint32_t> digits(Elem a) const;
  Elem from_digits(std::span<const std::uint32_t> digits) const;

  bool operator==(const FieldCtx& other) const;

 private:
  friend std::shared_ptr<const FieldCtx> build_field(std::uint32_t, std::uint32_t,
                                                     std::optional<std::vector<Elem>>,
                                                     std::uint64_t);
  FieldCtx() = default;

  Elem add_digits(Elem a, Elem b) const;
  Elem neg_digits(Elem a) const;

  std::uint32_t p_ = 0;
  std::uint32_t k_ = 0;
  std::uint32_t q_ = 0;
  std::vector<Elem> modulus_;
  Elem gen_ = 0;
  std::vector<Elem> exp_;            // size q - 1
  std::vector<std::uint32_t> log_;   // size q, log_[0] unused
  std::vector<std::uint32_t> trace_;  // size q
};

using FieldPtr = std::shared_ptr<const FieldCtx>;

/// Builds F_{p^k}. Without a modulus (and k > 1) the smallest monic irreducible
/// of degree k is chosen, comparing the low-order coefficients as a base-p
/// integer. Throws NotPrime, NotIrreducible, CapExceeded.
FieldPtr build_field(std::uint32_t p, std::uint32_t k,
                     std::optional<std::vector<Elem>> modulus = std::nullopt,
                     std::uint64_t cap = kDefaultFieldCap);

/// Monic irreducibility test over F_p (Rabin); coefficients low to high.
bool is_irreducible_mod_p(std::span<const std::uint32_t> poly, std::uint32_t p);

}  // namespace fflab
