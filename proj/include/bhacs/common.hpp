#pragma once

#include <stdexcept>
#include <string>

namespace bhacs {

// Library-wide error type. Thrown on contract violations (grid mismatch,
// failed validation, degenerate projections, malformed inputs).
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bhacs
