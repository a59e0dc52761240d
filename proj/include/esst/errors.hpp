#pragma once

#include <stdexcept>
#include <string>

namespace esst {

// Invalid quantum numbers, malformed model parameters and similar contract
// violations are reported with std::domain_error. Integration trouble gets its
// own type so the CLI can map it to a distinct exit code.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace esst
