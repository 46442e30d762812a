#pragma once

#include <stdexcept>
#include <string>

namespace spinenc {

// Bad input: out-of-range quantum numbers, malformed strings, non-Hermitian
// operators, inconsistent layouts. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A dense allocation would exceed a configured cap. The CLI maps this to
// exit code 3.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace spinenc
