#include "cair/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <bit>

namespace cair::kernels {

namespace {

void or_into_neon(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
  std::size_t i = 0;
  for (; i + 2 <= words; i += 2) {
    vst1q_u64(dst + i, vorrq_u64(vld1q_u64(dst + i), vld1q_u64(src + i)));
  }
  for (; i < words; ++i) dst[i] |= src[i];
}

std::uint64_t popcount_neon(const std::uint64_t* data, std::size_t words) {
  uint64x2_t acc = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= words; i += 2) {
    const uint8x16_t bytes = vcntq_u8(vreinterpretq_u8_u64(vld1q_u64(data + i)));
    acc = vaddq_u64(acc, vpaddlq_u32(vpaddlq_u16(vpaddlq_u8(bytes))));
  }
  std::uint64_t total = vgetq_lane_u64(acc, 0) + vgetq_lane_u64(acc, 1);
  for (; i < words; ++i) total += std::popcount(data[i]);
  return total;
}

constexpr BitsetKernels kNeon{Isa::Neon, "neon", &or_into_neon, &popcount_neon};

}  // namespace

namespace detail {
const BitsetKernels* neon_kernels() { return &kNeon; }
}  // namespace detail

}  // namespace cair::kernels

#else

namespace cair::kernels::detail {
const BitsetKernels* neon_kernels() { return nullptr; }
}  // namespace cair::kernels::detail

#endif
