#pragma once

#include <stdexcept>
#include <string>

namespace swplan {

/// Invalid caller input (bad node, malformed file, out-of-range value).
/// Maps to CLI exit code 1.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A planner could not reach the requested goal (wave extinguished,
/// iteration budget exhausted, greedy walk trapped). Maps to CLI exit code 2.
struct UnreachableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace swplan
