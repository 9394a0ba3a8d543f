#include "webrec/metrics.hpp"

#include <cmath>
#include <limits>

#include "webrec/csv.hpp"
#include "webrec/errors.hpp"
#include "webrec/grid.hpp"

namespace webrec {

AreaProfile resample_profile(const AreaProfile& p, std::span<const double> target) {
  p.validate();
  if (target.size() < 3) throw ParamError("resample_profile: need at least 3 target points");
  const double tol = 1e-9 * p.length();
  for (double t : target)
    if (t < -tol || t > p.length() + tol)
      throw RangeError("resample_profile: target point outside [0, length]");

  AreaProfile out;
  out.x.assign(target.begin(), target.end());
  out.a.resize(target.size());
  for (std::size_t i = 0; i < target.size(); ++i)
    out.a[i] = lerp_clamped(p.x, p.a, target[i]);
  out.generator = p.generator;
  out.seed = p.seed;
  out.validate();
  return out;
}

namespace {

std::vector<double> derivative(std::span<const double> y, double dx) {
  const std::size_t n = y.size();
  std::vector<double> d(n);
  d[0] = (y[1] - y[0]) / dx;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (2.0 * dx);
  d[n - 1] = (y[n - 1] - y[n - 2]) / dx;
  return d;
}

double weighted_norm(std::span<const double> v, double dx) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s * dx);
}

}  // namespace

ErrorRecord error_report(const AreaProfile& truth, const AreaProfile& rec) {
  truth.validate();
  rec.validate();
  if (truth.x.size() != rec.x.size())
    throw ParamError("error_report: profiles are not on a common grid");
  for (std::size_t i = 0; i < truth.x.size(); ++i)
    if (std::abs(truth.x[i] - rec.x[i]) > 1e-9 * std::max(1.0, truth.length()))
      throw ParamError("error_report: profiles are not on a common grid");

  const double dx = truth.dx();
  const std::size_t n = truth.x.size();
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = truth.a[i] - rec.a[i];

  const std::vector<double> de = derivative(e, dx);
  const std::vector<double> da = derivative(truth.a, dx);

  ErrorRecord r;
  r.l2_abs = weighted_norm(e, dx);
  const double de_norm = weighted_norm(de, dx);
  r.h1_abs = std::sqrt(r.l2_abs * r.l2_abs + de_norm * de_norm);

  const double a_l2 = weighted_norm(truth.a, dx);
  const double da_norm = weighted_norm(da, dx);
  const double a_h1 = std::sqrt(a_l2 * a_l2 + da_norm * da_norm);
  if (a_l2 > 0.0) {
    r.l2_rel = r.l2_abs / a_l2;
    r.h1_rel = r.h1_abs / a_h1;
  } else {
    r.rel_defined = false;
    r.l2_rel = r.h1_rel = std::numeric_limits<double>::quiet_NaN();
  }
  r.generator = truth.generator;
  return r;
}

void save_errors_csv(const std::vector<ErrorRecord>& records, const std::string& path) {
  csv::Writer w(path);
  w.header("realisation,generator,delta,method,l2_abs,l2_rel,h1_abs,h1_rel");
  for (const auto& r : records)
    w.row({std::to_string(r.realisation), r.generator, csv::format_double(r.delta), r.method,
           csv::format_double(r.l2_abs), csv::format_double(r.l2_rel),
           csv::format_double(r.h1_abs), csv::format_double(r.h1_rel)});
}

std::vector<ErrorRecord> load_errors_csv(const std::string& path) {
  const csv::Table t = csv::read_file(path);
  const std::size_t ci = t.column_index("realisation");
  const std::size_t cg = t.column_index("generator");
  const std::size_t cd = t.column_index("delta");
  const std::size_t cm = t.column_index("method");
  const std::size_t c0 = t.column_index("l2_abs");
  const std::size_t c1 = t.column_index("l2_rel");
  const std::size_t c2 = t.column_index("h1_abs");
  const std::size_t c3 = t.column_index("h1_rel");
  std::vector<ErrorRecord> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    ErrorRecord r;
    r.realisation = std::stoi(row.at(ci));
    r.generator = row.at(cg);
    r.delta = std::stod(row.at(cd));
    r.method = row.at(cm);
    r.l2_abs = std::stod(row.at(c0));
    r.l2_rel = std::stod(row.at(c1));
    r.h1_abs = std::stod(row.at(c2));
    r.h1_rel = std::stod(row.at(c3));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace webrec
