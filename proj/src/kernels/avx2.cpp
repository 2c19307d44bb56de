#include "cair/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <bit>

namespace cair::kernels {

namespace {

__attribute__((target("avx2"))) void or_into_avx2(std::uint64_t* dst, const std::uint64_t* src,
                                                   std::size_t words) {
  std::size_t i = 0;
  for (; i + 8 <= words; i += 8) {
    auto* d = reinterpret_cast<__m256i*>(dst + i);
    const auto* s = reinterpret_cast<const __m256i*>(src + i);
    const __m256i a0 = _mm256_or_si256(_mm256_loadu_si256(d), _mm256_loadu_si256(s));
    const __m256i a1 = _mm256_or_si256(_mm256_loadu_si256(d + 1), _mm256_loadu_si256(s + 1));
    _mm256_storeu_si256(d, a0);
    _mm256_storeu_si256(d + 1, a1);
  }
  for (; i + 4 <= words; i += 4) {
    auto* d = reinterpret_cast<__m256i*>(dst + i);
    const auto* s = reinterpret_cast<const __m256i*>(src + i);
    _mm256_storeu_si256(d, _mm256_or_si256(_mm256_loadu_si256(d), _mm256_loadu_si256(s)));
  }
  for (; i < words; ++i) dst[i] |= src[i];
}

// Nibble lookup popcount: per-byte counts via pshufb, folded with psadbw.
__attribute__((target("avx2"))) inline __m256i popcount_bytes(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,  //
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  return _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
}

__attribute__((target("avx2"))) std::uint64_t popcount_avx2(const std::uint64_t* data,
                                                            std::size_t words) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(popcount_bytes(v), _mm256_setzero_si256()));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < words; ++i) total += std::popcount(data[i]);
  return total;
}

constexpr BitsetKernels kAvx2{Isa::Avx2, "avx2", &or_into_avx2, &popcount_avx2};

}  // namespace

namespace detail {
const BitsetKernels* avx2_kernels() {
  return __builtin_cpu_supports("avx2") ? &kAvx2 : nullptr;
}
}  // namespace detail

}  // namespace cair::kernels

#else

namespace cair::kernels::detail {
const BitsetKernels* avx2_kernels() { return nullptr; }
}  // namespace cair::kernels::detail

#endif
