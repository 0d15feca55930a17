#pragma once

#include <stdexcept>
#include <string>

namespace ffcorr {

// Invalid input: bad syntax, out-of-range parameter, violated precondition.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A computation would exceed its configured memory/size budget.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ffcorr
