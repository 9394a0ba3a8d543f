#pragma once

#include <stdexcept>
#include <string>

namespace webrec {

// Invalid configuration or argument values.
class ParamError : public std::invalid_argument {
 public:
  explicit ParamError(const std::string& what) : std::invalid_argument(what) {}
};

// Requested window, sample or target outside the available data.
class RangeError : public std::out_of_range {
 public:
  explicit RangeError(const std::string& what) : std::out_of_range(what) {}
};

// Breakdown of a numerical procedure (NaN/Inf, singular system, no convergence).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace webrec
