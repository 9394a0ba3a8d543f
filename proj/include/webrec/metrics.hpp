#pragma once

#include <span>
#include <string>
#include <vector>

#include "webrec/profiles.hpp"

namespace webrec {

struct ErrorRecord {
  double l2_abs = 0.0, l2_rel = 0.0, h1_abs = 0.0, h1_rel = 0.0;
  std::string method;  // "sg" | "klo"
  double delta = 0.0;
  int realisation = 0;
  std::string generator;
  bool rel_defined = true;  // false when the truth norm is zero
};

// Linear resampling onto a target grid inside the profile domain; targets
// outside [0, length] (beyond rounding) are rejected.
AreaProfile resample_profile(const AreaProfile& p, std::span<const double> target);

// Absolute and relative L2/H1 errors on a common grid (grids must match).
// Derivatives by central differences, one-sided at the ends, same stencil for
// both profiles.
ErrorRecord error_report(const AreaProfile& truth, const AreaProfile& rec);

void save_errors_csv(const std::vector<ErrorRecord>& records, const std::string& path);
std::vector<ErrorRecord> load_errors_csv(const std::string& path);

}  // namespace webrec
