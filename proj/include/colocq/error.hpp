#pragma once

#include <stdexcept>
#include <string>

namespace colocq {

// Malformed or inconsistent input data (files, rows, network topology).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition of an analysis is not met for the given data and parameters.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace colocq
