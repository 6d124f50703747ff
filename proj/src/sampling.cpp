#include "fflab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fflab {

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

std::vector<std::size_t> random_index_subset(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  m = std::min(m, n);
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + uniform_below(rng, n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<Elem> random_subset(std::mt19937_64& rng, std::span<const Elem> universe, std::size_t m) {
  std::vector<Elem> out;
  for (const auto i : random_index_subset(rng, universe.size(), m)) out.push_back(universe[i]);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t size_for_exponent(std::uint64_t q, double alpha, std::size_t limit) {
  const double v = std::pow(static_cast<double>(q), alpha);
  auto s = static_cast<std::size_t>(std::ceil(v * (1.0 - 1e-12)));
  return std::clamp<std::size_t>(s, 1, limit);
}

std::vector<Elem> all_elements(const FieldCtx& f) {
  std::vector<Elem> v(f.q());
  std::iota(v.begin(), v.end(), Elem{0});
  return v;
}

std::vector<Elem> nonzero_elements(const FieldCtx& f) {
  std::vector<Elem> v(f.q() - 1);
  std::iota(v.begin(), v.end(), Elem{1});
  return v;
}

double uniform_signed(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-52 - 1.0;
}

}  // namespace fflab
