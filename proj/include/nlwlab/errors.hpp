#pragma once

#include <stdexcept>
#include <string>

namespace nlwlab {

// Numeric values double as CLI exit codes where the two overlap.
enum class error_code {
  ok = 0,
  invalid_argument = 1,
  validation = 2,
  numerical = 3,
  unconverged = 4,
  domain = 5,
  range = 6,
  io = 7,
  conditioning = 8,
  refinement = 9,
};

class error : public std::runtime_error {
 public:
  error(error_code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  error_code code() const noexcept { return code_; }

 private:
  error_code code_;
};

inline void require(bool ok, error_code code, const std::string& what) {
  if (!ok) throw error(code, what);
}

inline void require_domain(bool ok, const std::string& what) { require(ok, error_code::domain, what); }
inline void require_range(bool ok, const std::string& what) { require(ok, error_code::range, what); }

}  // namespace nlwlab
