#ifndef SPECREC_ERROR_HPP
#define SPECREC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace specrec {

// Malformed or unsupported input (curve files, CLI arguments, out-of-scope
// curve shapes).  CLI exit code 1.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// A mathematical invariant that is supposed to hold failed to verify.
// CLI exit code 2.
struct VerificationError : std::runtime_error {
  explicit VerificationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A truncated-series computation was asked for a coefficient beyond its
// guaranteed order.  Callers that can retry at higher order catch this;
// if it escapes to the CLI the exit code is 3.
struct PrecisionError : std::runtime_error {
  explicit PrecisionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace specrec

#endif
