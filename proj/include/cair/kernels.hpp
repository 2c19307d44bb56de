#pragma once

// Bitset kernels behind the dominance computation. The scalar variant is
// the reference; vector variants must produce bit-identical results and are
// chosen at runtime from what the CPU supports. Setting CAIR_SIMD=scalar in
// the environment forces the reference path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cair::kernels {

enum class Isa { Scalar, Avx2, Neon };

struct BitsetKernels {
  Isa isa;
  const char* name;
  // dst[i] |= src[i] for i < words
  void (*or_into)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
  std::uint64_t (*popcount)(const std::uint64_t* data, std::size_t words);
};

const BitsetKernels& scalar();
// Variants compiled in and supported by this CPU, scalar first.
std::vector<const BitsetKernels*> available();
// Best available variant, honouring CAIR_SIMD.
const BitsetKernels& active();

inline void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  active().or_into(dst.data(), src.data(), dst.size() < src.size() ? dst.size() : src.size());
}

inline std::uint64_t popcount(std::span<const std::uint64_t> data) {
  return active().popcount(data.data(), data.size());
}

namespace detail {
const BitsetKernels* avx2_kernels();  // nullptr when not built for x86-64
const BitsetKernels* neon_kernels();  // nullptr when not built for AArch64
}  // namespace detail

}  // namespace cair::kernels
