// Error types shared by all modules.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace algwb {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SyntaxError : Error {
  using Error::Error;
};
struct RangeError : Error {
  using Error::Error;
};
struct NotIdempotent : Error {
  using Error::Error;
};
struct NotACongruence : Error {
  using Error::Error;
};
struct NotClosed : Error {
  using Error::Error;
};
struct SignatureMismatch : Error {
  using Error::Error;
};
struct NotPrime : Error {
  using Error::Error;
};
struct TypeMismatch : Error {
  using Error::Error;
};
struct NotSubdirect : Error {
  using Error::Error;
};
struct HypothesisNotMet : Error {
  using Error::Error;
};
struct NotFound : Error {
  using Error::Error;
};
struct UnknownLemma : Error {
  using Error::Error;
};
struct InternalError : Error {
  using Error::Error;
};

// Raised when an enumeration grows past its cap.  Callers that implement
// three-valued verdicts catch this and mark the result inconclusive.
struct CapExceeded : Error {
  std::size_t cap;
  explicit CapExceeded(std::size_t c, const std::string& what_arg)
      : Error(what_arg + " (cap " + std::to_string(c) + " exceeded)"), cap(c) {}
};

// Default cap for every enumeration in the library.
inline constexpr std::size_t kDefaultCap = 1'000'000;

}  // namespace algwb
