#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "fflab/field.hpp"

namespace fflab {

/// Portable generator: std::mt19937_64 seeded through std::seed_seq from the
/// master seed and the trial index, so every trial owns an independent stream.
inline constexpr std::string_view kGeneratorName = "mt19937_64+seed_seq";

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

/// Uniform integer in [0, n) by rejection; n > 0.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

/// Uniform double in [-1, 1) from the top 53 bits of one draw.
double uniform_signed(std::mt19937_64& rng);

/// Uniform size-m subset of the universe without replacement, sorted.
std::vector<Elem> random_subset(std::mt19937_64& rng, std::span<const Elem> universe, std::size_t m);
/// Uniform size-m subset of {0, ..., n-1}, sorted.
std::vector<std::size_t> random_index_subset(std::mt19937_64& rng, std::size_t n, std::size_t m);

/// ceil(q^alpha), clamped to [1, limit].
std::size_t size_for_exponent(std::uint64_t q, double alpha, std::size_t limit);

std::vector<Elem> all_elements(const FieldCtx& f);
std::vector<Elem> nonzero_elements(const FieldCtx& f);

}  // namespace fflab
