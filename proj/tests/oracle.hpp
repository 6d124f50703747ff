#pragma once

// Test-only reference computations, written from the definitions and kept
// independent of the library's table-driven code paths.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <set>
#include <vector>

namespace oracle {

inline std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

/// Multiplicative order of a in F_p^*, by repeated multiplication.
inline std::uint64_t order_mod(std::uint64_t a, std::uint64_t p) {
  std::uint64_t x = a % p, n = 1;
  while (x != 1) {
    x = x * a % p;
    ++n;
  }
  return n;
}

/// Smallest generator of F_p^* by exhaustive order computation.
inline std::uint64_t smallest_generator(std::uint64_t p) {
  for (std::uint64_t a = 1; a < p; ++a) {
    if (order_mod(a, p) == p - 1) return a;
  }
  return 0;
}

/// Schoolbook product of base-p digit vectors reduced by a monic modulus.
inline std::vector<std::uint32_t> poly_mulmod(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                                              const std::vector<std::uint32_t>& modulus, std::uint32_t p) {
  const std::size_t k = modulus.size() - 1;
  std::vector<std::uint64_t> prod(2 * k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
  }
  for (std::size_t top = 2 * k - 1; top >= k; --top) {
    const std::uint64_t c = prod[top];
    if (c != 0) {
      for (std::size_t i = 0; i <= k; ++i) prod[top - k + i] = (prod[top - k + i] + (p - c) * modulus[i]) % p;
    }
    if (top == k) break;
  }
  return std::vector<std::uint32_t>(prod.begin(), prod.begin() + k);
}

inline std::vector<std::uint32_t> digits_of(std::uint32_t v, std::uint32_t p, std::size_t k) {
  std::vector<std::uint32_t> d(k);
  for (auto& x : d) {
    x = v % p;
    v /= p;
  }
  return d;
}

inline std::uint32_t index_of(const std::vector<std::uint32_t>& d, std::uint32_t p) {
  std::uint32_t v = 0;
  for (std::size_t i = d.size(); i-- > 0;) v = v * p + d[i];
  return v;
}

/// Tr(c) = c + c^p + ... + c^{p^{k-1}} by explicit polynomial powering.
inline std::uint32_t trace(std::uint32_t c, std::uint32_t p, const std::vector<std::uint32_t>& modulus) {
  const std::size_t k = modulus.size() - 1;
  auto cur = digits_of(c, p, k);
  std::vector<std::uint32_t> acc(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) acc[j] = (acc[j] + cur[j]) % p;
    auto pw = digits_of(1, p, k);
    for (std::uint32_t e = 0; e < p; ++e) pw = poly_mulmod(pw, cur, modulus, p);
    cur = pw;
  }
  return index_of(acc, p);
}

inline std::complex<double> e(double num, double den) {
  return std::polar(1.0, 2.0 * std::numbers::pi * num / den);
}

/// sum_{x in F_p} e(a x^2 / p)
inline std::complex<double> gauss_sum(std::uint64_t p, std::uint64_t a = 1) {
  std::complex<double> s{};
  for (std::uint64_t x = 0; x < p; ++x) s += e(static_cast<double>(a * x % p * x % p), static_cast<double>(p));
  return s;
}

}  // namespace oracle
