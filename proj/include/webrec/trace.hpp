#pragma once

#include <string>
#include <vector>

#include "webrec/errors.hpp"

namespace webrec {

enum class TraceKind { SgImpulseResponse, KloTrace };

// Uniformly sampled inlet pressure record (sample n at time n*dt).
struct BoundaryTrace {
  double dt = 0.0;
  std::vector<double> samples;
  TraceKind kind = TraceKind::SgImpulseResponse;
  bool impulse_removed = false;

  double t_final() const { return dt * static_cast<double>(samples.size() - 1); }
  void validate() const;
};

std::string trace_kind_name(TraceKind k);
TraceKind trace_kind_from_name(const std::string& s);

// Linear resampling onto a new uniform time grid (n_dst samples at dt_dst).
BoundaryTrace resample_trace(const BoundaryTrace& t, double dt_dst, std::size_t n_dst);

void save_trace_csv(const BoundaryTrace& t, const std::string& path);
BoundaryTrace load_trace_csv(const std::string& path);

}  // namespace webrec
