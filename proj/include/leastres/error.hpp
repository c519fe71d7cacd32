#pragma once

#include <stdexcept>
#include <string>

namespace leastres {

/// Input rejected by an operation's preconditions. The CLI maps this to exit
/// status 1.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string &what) : std::invalid_argument(what) {}
};

/// Two independent evaluation routes disagreed beyond tolerance.
class ConsistencyError : public std::logic_error {
 public:
  explicit ConsistencyError(const std::string &what) : std::logic_error(what) {}
};

}  // namespace leastres
