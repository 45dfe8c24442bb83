#pragma once

#include <stdexcept>
#include <string>

namespace nacmint {

/// Malformed or degenerate input data (bad records, empty summaries, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scoring model broke its contract or decoding could not produce output.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nacmint
