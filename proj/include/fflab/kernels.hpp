#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>

// Inner loops shared by the transforms and the set engines. Every kernel has
// a portable scalar reference; vector variants are selected at runtime and
// must agree with it (bit-exactly for the integer kernels, to rounding for
// the floating-point ones).
namespace fflab::kernels {

struct KernelSet {
  std::string_view name;

  // sum_n (xr[n] + i xi[n]) * (wr[idx[n]] + i wi[idx[n]])
  std::complex<double> (*gather_dot)(const double* xr, const double* xi, const std::uint32_t* idx,
                                     std::size_t n, const double* wr, const double* wi);

  // dst |= src << shift, where both are little-endian bit arrays; bits landing
  // at or beyond dst_words * 64 are dropped.
  void (*or_shifted)(std::uint64_t* dst, std::size_t dst_words, const std::uint64_t* src,
                     std::size_t src_words, std::size_t shift);

  std::size_t (*popcount)(const std::uint64_t* words, std::size_t n);
};

const KernelSet& scalar();

/// nullptr when the build or the CPU lacks AVX2+FMA.
const KernelSet* avx2();

/// The kernel set in use. Defaults to the widest supported variant; the
/// FFLAB_KERNELS environment variable ("scalar", "avx2", "auto") overrides it.
const KernelSet& active();

/// Selects a kernel set by name for the rest of the process; throws
/// PreconditionViolated for an unknown or unsupported name.
void select(std::string_view name);

}  // namespace fflab::kernels
