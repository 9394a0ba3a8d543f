#pragma once

#include <span>
#include <string>
#include <vector>

#include "webrec/metrics.hpp"

namespace webrec {

// Two-sided Student-t p-value via the regularised incomplete beta function.
double student_t_two_sided_p(double t, double nu);
// Quantile t_q with P(T <= t_q) = q (bisection on the cdf).
double student_t_quantile(double q, double nu);
double normal_cdf(double z);

struct TTestResult {
  double mean = 0.0, sd = 0.0;
  double t = 0.0, p = 1.0;
  double ci_lo = 0.0, ci_hi = 0.0;  // 95% for the mean difference
  bool degenerate = false;          // zero sample variance
};
TTestResult paired_t(std::span<const double> d);

struct WilcoxonResult {
  double w_plus = 0.0, w_minus = 0.0;
  double p = 1.0;
  bool degenerate = false;  // all differences zero
  bool exact = false;       // exact enumeration used (n < 25 after zero removal)
};
WilcoxonResult wilcoxon(std::span<const double> d);
// Both code paths exposed for cross-validation.
WilcoxonResult wilcoxon_exact(std::span<const double> d);
WilcoxonResult wilcoxon_normal(std::span<const double> d);

struct EffectSizes {
  double cohen_d = 0.0;
  double rank_biserial = 0.0;
  bool degenerate = false;
};
EffectSizes effect_sizes(std::span<const double> d);

// Paired differences d_i = e_klo - e_sg for one (noise level, metric) cell.
struct PairedSample {
  std::vector<double> d;
  std::string metric;
  double delta = 0.0;
};

// Matched-pair extraction; throws on an unpaired realisation, naming the index.
std::vector<PairedSample> paired_samples(const std::vector<ErrorRecord>& records);

// Paired summary for one (noise level, metric) cell, d_i = e_klo - e_sg.
struct StatReport {
  double delta = 0.0;
  std::string metric;  // l2_abs | l2_rel | h1_abs | h1_rel
  std::size_t n = 0;
  double mean_sg = 0.0, mean_klo = 0.0, ratio = 0.0;
  double mean_diff = 0.0, ci_lo = 0.0, ci_hi = 0.0;
  double t_stat = 0.0, p_t = 1.0;
  double w_plus = 0.0, w_minus = 0.0, p_wilcoxon = 1.0;
  double cohen_d = 0.0, rank_biserial = 0.0;
  double win_rate_klo = 0.0;  // fraction with d < 0, ties as half wins
  bool degenerate = false;
};

// Pair records by (realisation, delta) and build one report per (delta,
// metric). Throws on an unpaired realisation, naming the index.
std::vector<StatReport> summarize(const std::vector<ErrorRecord>& records);

void save_table8_csv(const std::vector<StatReport>& reports, const std::string& path);
void save_report_json(const std::vector<StatReport>& reports, const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& meta = {});

}  // namespace webrec
