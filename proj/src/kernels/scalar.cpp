#include <bit>

#include "fflab/kernels.hpp"

namespace fflab::kernels {

namespace {

std::complex<double> gather_dot_scalar(const double* xr, const double* xi, const std::uint32_t* idx,
                                       std::size_t n, const double* wr, const double* wi) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = wr[idx[i]], b = wi[idx[i]];
    re += xr[i] * a - xi[i] * b;
    im += xr[i] * b + xi[i] * a;
  }
  return {re, im};
}

void or_shifted_scalar(std::uint64_t* dst, std::size_t dst_words, const std::uint64_t* src,
                       std::size_t src_words, std::size_t shift) {
  const std::size_t ws = shift / 64, bs = shift % 64;
  for (std::size_t s = 0; s <= src_words; ++s) {
    const std::size_t w = s + ws;
    if (w >= dst_words) break;
    std::uint64_t v = s < src_words ? src[s] << bs : 0;
    if (bs != 0 && s >= 1) v |= src[s - 1] >> (64 - bs);
    dst[w] |= v;
  }
}

std::size_t popcount_scalar(const std::uint64_t* words, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += static_cast<std::size_t>(std::popcount(words[i]));
  return c;
}

}  // namespace

const KernelSet& scalar() {
  static const KernelSet set{"scalar", gather_dot_scalar, or_shifted_scalar, popcount_scalar};
  return set;
}

}  // namespace fflab::kernels
