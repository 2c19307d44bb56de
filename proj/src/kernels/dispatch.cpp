#include <cstdlib>
#include <string_view>

#include "cair/kernels.hpp"

namespace cair::kernels {

std::vector<const BitsetKernels*> available() {
  std::vector<const BitsetKernels*> out{&scalar()};
  if (const auto* k = detail::avx2_kernels()) out.push_back(k);
  if (const auto* k = detail::neon_kernels()) out.push_back(k);
  return out;
}

const BitsetKernels& active() {
  static const BitsetKernels* const best = available().back();
  const char* env = std::getenv("CAIR_SIMD");
  if (env && std::string_view(env) == "scalar") return scalar();
  return *best;
}

}  // namespace cair::kernels
