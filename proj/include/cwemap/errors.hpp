#pragma once

#include <stdexcept>
#include <string>

namespace cwemap {

/// Input or configuration problem attributable to the user or the data on
/// disk. The CLI maps these to exit status 2; anything else escaping to
/// main() is an internal error (exit status 1).
class UserError : public std::runtime_error {
 public:
  explicit UserError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace cwemap
