#pragma once

#include <stdexcept>
#include <string>

namespace coiso {

// Invalid input: wrong dimensions, out-of-range parameters, malformed data.
struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A mathematical identity that must hold was violated at runtime.
// Reaching this indicates a bug or corrupted data, not a user mistake.
struct check_error : std::runtime_error {
  explicit check_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline void check(bool cond, const char* msg) {
  if (!cond) throw check_error(msg);
}

inline void check(bool cond, const std::string& msg) {
  if (!cond) throw check_error(msg);
}

inline void require(bool cond, const char* msg) {
  if (!cond) throw domain_error(msg);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw domain_error(msg);
}

}  // namespace coiso
