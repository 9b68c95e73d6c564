#pragma once

#include <stdexcept>
#include <string>

namespace aljabar {

/// Two colors (or a color and a multiset) from different groups were combined.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Group parameters or game configuration violate a rule of setup.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation defined only for particular group parameters.
class NotApplicable : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An engine operation was called in a state where its precondition fails.
class RuleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace aljabar
