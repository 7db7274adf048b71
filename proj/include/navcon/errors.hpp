#pragma once

#include <stdexcept>
#include <string>

namespace navcon {

/// Rejected input: bad parameters, malformed scenario documents, violated
/// preconditions. Maps to CLI exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// A run or check that started from valid input but could not complete
/// (infeasible deployment, degenerate field configuration, lost connectivity).
/// Maps to CLI exit code 3.
class RuntimeFailure : public std::runtime_error {
 public:
  explicit RuntimeFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace navcon
