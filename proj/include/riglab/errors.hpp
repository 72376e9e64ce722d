#pragma once

#include <stdexcept>

namespace riglab {

/// A computation would exceed its configured work or memory budget.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace riglab
