#include <bit>

#include "cair/kernels.hpp"

namespace cair::kernels {

namespace {

void or_into_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
  for (std::size_t i = 0; i < words; ++i) dst[i] |= src[i];
}

std::uint64_t popcount_scalar(const std::uint64_t* data, std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(data[i]);
  return total;
}

constexpr BitsetKernels kScalar{Isa::Scalar, "scalar", &or_into_scalar, &popcount_scalar};

}  // namespace

const BitsetKernels& scalar() { return kScalar; }

}  // namespace cair::kernels
