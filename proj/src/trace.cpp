#include "webrec/trace.hpp"

#include <cmath>

#include "webrec/csv.hpp"
#include "webrec/grid.hpp"

namespace webrec {

void BoundaryTrace::validate() const {
  if (!(dt > 0.0)) throw ParamError("BoundaryTrace: dt must be positive");
  if (samples.size() < 2) throw ParamError("BoundaryTrace: need at least 2 samples");
  for (double v : samples)
    if (!std::isfinite(v)) throw ParamError("BoundaryTrace: samples must be finite");
}

std::string trace_kind_name(TraceKind k) {
  return k == TraceKind::SgImpulseResponse ? "SgImpulseResponse" : "KloTrace";
}

TraceKind trace_kind_from_name(const std::string& s) {
  if (s == "SgImpulseResponse") return TraceKind::SgImpulseResponse;
  if (s == "KloTrace") return TraceKind::KloTrace;
  throw ParamError("unknown trace kind '" + s + "'");
}

BoundaryTrace resample_trace(const BoundaryTrace& t, double dt_dst, std::size_t n_dst) {
  t.validate();
  if (!(dt_dst > 0.0) || n_dst < 2) throw ParamError("resample_trace: bad target grid");
  BoundaryTrace out;
  out.dt = dt_dst;
  out.kind = t.kind;
  out.impulse_removed = t.impulse_removed;
  out.samples = resample_uniform(t.samples, t.dt, dt_dst, n_dst);
  return out;
}

void save_trace_csv(const BoundaryTrace& t, const std::string& path) {
  csv::Writer w(path);
  w.comment("dt", csv::format_double(t.dt));
  w.comment("kind", trace_kind_name(t.kind));
  w.comment("impulse_removed", t.impulse_removed ? "1" : "0");
  w.header("t,H0");
  for (std::size_t n = 0; n < t.samples.size(); ++n)
    w.row({csv::format_double(t.dt * static_cast<double>(n)), csv::format_double(t.samples[n])});
}

BoundaryTrace load_trace_csv(const std::string& path) {
  const csv::Table tab = csv::read_file(path);
  BoundaryTrace t;
  t.dt = std::stod(tab.meta_value("dt"));
  t.kind = trace_kind_from_name(tab.meta_value("kind"));
  t.impulse_removed = tab.has_meta("impulse_removed") && tab.meta_value("impulse_removed") == "1";
  t.samples = tab.numeric_column("H0");
  t.validate();
  return t;
}

}  // namespace webrec
