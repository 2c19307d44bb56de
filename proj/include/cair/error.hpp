#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cair {

enum class ErrorCode {
  EmptyPath,
  LoopDetected,
  Malformed,
  IoError,
  VersionMismatch,
  CorruptFile,
  UnknownState,
  InvalidSpec,
  ContractViolation,
};

const char* to_string(ErrorCode code);

// Single exception type for the library; `code()` tells callers which
// contract failed. LoopDetected carries the offending AS in `asn()`.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::uint32_t asn = 0)
      : std::runtime_error(what), code_(code), asn_(asn) {}

  ErrorCode code() const noexcept { return code_; }
  std::uint32_t asn() const noexcept { return asn_; }

 private:
  ErrorCode code_;
  std::uint32_t asn_;
};

}  // namespace cair
