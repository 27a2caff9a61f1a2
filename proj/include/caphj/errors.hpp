#pragma once

#include <stdexcept>
#include <string>

namespace caphj {

// Thrown when a numerical procedure fails to deliver its contract
// (non-convergence, violated envelope, bracket failure). Distinct from
// std::invalid_argument, which signals a violated precondition; the CLI
// maps the two to different exit codes.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace caphj
