#include <immintrin.h>

#include <bit>

#include "fflab/kernels.hpp"

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
namespace fflab::kernels {

namespace {

std::complex<double> gather_dot_avx2(const double* xr, const double* xi, const std::uint32_t* idx,
                                     std::size_t n, const double* wr, const double* wi) {
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i id = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
    const __m256d a = _mm256_i32gather_pd(wr, id, 8);
    const __m256d b = _mm256_i32gather_pd(wi, id, 8);
    const __m256d x = _mm256_loadu_pd(xr + i);
    const __m256d y = _mm256_loadu_pd(xi + i);
    acc_re = _mm256_fmadd_pd(x, a, acc_re);
    acc_re = _mm256_fnmadd_pd(y, b, acc_re);
    acc_im = _mm256_fmadd_pd(x, b, acc_im);
    acc_im = _mm256_fmadd_pd(y, a, acc_im);
  }
  alignas(32) double lr[4], li[4];
  _mm256_store_pd(lr, acc_re);
  _mm256_store_pd(li, acc_im);
  double re = (lr[0] + lr[1]) + (lr[2] + lr[3]);
  double im = (li[0] + li[1]) + (li[2] + li[3]);
  for (; i < n; ++i) {
    const double a = wr[idx[i]], b = wi[idx[i]];
    re += xr[i] * a - xi[i] * b;
    im += xr[i] * b + xi[i] * a;
  }
  return {re, im};
}

inline std::uint64_t shifted_word(const std::uint64_t* src, std::size_t src_words, std::size_t s,
                                  std::size_t bs) {
  std::uint64_t v = s < src_words ? src[s] << bs : 0;
  if (bs != 0 && s >= 1 && s - 1 < src_words) v |= src[s - 1] >> (64 - bs);
  return v;
}

void or_shifted_avx2(std::uint64_t* dst, std::size_t dst_words, const std::uint64_t* src,
                     std::size_t src_words, std::size_t shift) {
  const std::size_t ws = shift / 64, bs = shift % 64;
  if (ws >= dst_words) return;
  // Source word s lands in destination word s + ws.
  const std::size_t s_end = std::min(src_words + 1, dst_words - ws);
  std::size_t s = 0;
  // The vector body needs src[s - 1 .. s + 3] in range.
  if (s_end > 0) dst[ws] |= shifted_word(src, src_words, 0, bs);
  s = 1;
  const __m128i left = _mm_cvtsi64_si128(static_cast<long long>(bs));
  const __m128i right = _mm_cvtsi64_si128(static_cast<long long>(64 - bs));
  for (; s + 4 <= std::min(s_end, src_words); s += 4) {
    const __m256i cur = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + s));
    const __m256i prev = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + s - 1));
    // a shift count of 64 yields zero, which covers bs == 0
    const __m256i v = _mm256_or_si256(_mm256_sll_epi64(cur, left), _mm256_srl_epi64(prev, right));
    __m256i* out = reinterpret_cast<__m256i*>(dst + s + ws);
    _mm256_storeu_si256(out, _mm256_or_si256(_mm256_loadu_si256(out), v));
  }
  for (; s < s_end; ++s) dst[s + ws] |= shifted_word(src, src_words, s, bs);
}

std::size_t popcount_avx2(const std::uint64_t* words, std::size_t n) {
  // Nibble lookup with byte sums accumulated per 64-bit lane.
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4, 0, 1, 1, 2, 1,
                                       2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words + i));
    const __m256i lo = _mm256_and_si256(v, low_mask);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    const __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(cnt, _mm256_setzero_si256()));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::size_t c = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) c += static_cast<std::size_t>(std::popcount(words[i]));
  return c;
}

}  // namespace

const KernelSet& avx2_unchecked() {
  static const KernelSet set{"avx2", gather_dot_avx2, or_shifted_avx2, popcount_avx2};
  return set;
}

}  // namespace fflab::kernels
