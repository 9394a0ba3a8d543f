#include "webrec/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "webrec/csv.hpp"
#include "webrec/errors.hpp"

#include "json.hpp"

namespace webrec {

namespace {

// Continued fraction for the regularised incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
  const int max_it = 300;
  const double eps = 3e-16, fpmin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::abs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_it; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

double betai(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double bt =
      std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
               b * std::log(1.0 - x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

// Average ranks of |d| over the nonzero entries.
struct RankedDiffs {
  std::vector<double> rank;  // parallel to values
  std::vector<double> value;
  std::vector<std::size_t> tie_sizes;
};

RankedDiffs rank_abs_nonzero(std::span<const double> d) {
  RankedDiffs r;
  for (double v : d)
    if (v != 0.0) r.value.push_back(v);
  const std::size_t n = r.value.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(r.value[a]) < std::abs(r.value[b]);
  });
  r.rank.resize(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n &&
           std::abs(r.value[order[j + 1]]) == std::abs(r.value[order[i]]))
      ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // ranks are 1-based
    for (std::size_t k = i; k <= j; ++k) r.rank[order[k]] = avg;
    r.tie_sizes.push_back(j - i + 1);
    i = j + 1;
  }
  return r;
}

double wilcoxon_exact_p(const RankedDiffs& r, double w_plus) {
  // Distribution of W+ over all sign assignments, on doubled ranks so tied
  // (half-integer) ranks stay integral.
  const std::size_t n = r.rank.size();
  std::vector<long long> dr(n);
  long long total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    dr[i] = std::llround(2.0 * r.rank[i]);
    total += dr[i];
  }
  std::vector<double> dist(static_cast<std::size_t>(total) + 1, 0.0);
  dist[0] = 1.0;
  long long reach = 0;
  for (std::size_t i = 0; i < n; ++i) {
    reach += dr[i];
    for (long long s = reach; s >= dr[i]; --s)
      dist[static_cast<std::size_t>(s)] += dist[static_cast<std::size_t>(s - dr[i])];
  }
  const double denom = std::pow(2.0, static_cast<double>(n));
  const long long w2 = std::llround(2.0 * w_plus);
  double p_le = 0.0, p_ge = 0.0;
  for (long long s = 0; s <= total; ++s) {
    const double c = dist[static_cast<std::size_t>(s)];
    if (s <= w2) p_le += c;
    if (s >= w2) p_ge += c;
  }
  return std::min(1.0, 2.0 * std::min(p_le, p_ge) / denom);
}

double wilcoxon_normal_p(const RankedDiffs& r, double w_plus) {
  const double n = static_cast<double>(r.rank.size());
  const double mu = n * (n + 1.0) / 4.0;
  double tie_corr = 0.0;
  for (std::size_t t : r.tie_sizes) {
    const double td = static_cast<double>(t);
    tie_corr += td * td * td - td;
  }
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_corr / 48.0;
  if (!(var > 0.0)) return 1.0;
  double num = w_plus - mu;
  num -= 0.5 * (num > 0.0 ? 1.0 : (num < 0.0 ? -1.0 : 0.0));  // continuity correction
  const double z = num / std::sqrt(var);
  return std::min(1.0, 2.0 * normal_cdf(-std::abs(z)));
}

WilcoxonResult wilcoxon_with(std::span<const double> d, int mode) {
  if (d.size() < 2) throw ParamError("wilcoxon: need at least 2 differences");
  const RankedDiffs r = rank_abs_nonzero(d);
  WilcoxonResult res;
  if (r.value.empty()) {
    res.degenerate = true;
    return res;
  }
  for (std::size_t i = 0; i < r.value.size(); ++i)
    (r.value[i] > 0.0 ? res.w_plus : res.w_minus) += r.rank[i];
  const bool exact = mode == 1 || (mode == 0 && r.value.size() < 25);
  res.exact = exact;
  res.p = exact ? wilcoxon_exact_p(r, res.w_plus) : wilcoxon_normal_p(r, res.w_plus);
  return res;
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double student_t_two_sided_p(double t, double nu) {
  if (!(nu > 0.0)) throw ParamError("student_t_two_sided_p: nu must be positive");
  return betai(0.5 * nu, 0.5, nu / (nu + t * t));
}

double student_t_quantile(double q, double nu) {
  if (!(q > 0.0) || !(q < 1.0)) throw ParamError("student_t_quantile: q in (0,1)");
  if (q == 0.5) return 0.0;
  const bool upper = q > 0.5;
  const double p_two = upper ? 2.0 * (1.0 - q) : 2.0 * q;  // two-sided tail mass
  double lo = 0.0, hi = 1.0;
  while (student_t_two_sided_p(hi, nu) > p_two) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_two_sided_p(mid, nu) > p_two)
      lo = mid;
    else
      hi = mid;
  }
  const double t = 0.5 * (lo + hi);
  return upper ? t : -t;
}

TTestResult paired_t(std::span<const double> d) {
  const std::size_t n = d.size();
  if (n < 2) throw ParamError("paired_t: need at least 2 differences");
  TTestResult r;
  for (double v : d) r.mean += v;
  r.mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - r.mean) * (v - r.mean);
  const double var = ss / static_cast<double>(n - 1);
  r.sd = std::sqrt(var);
  if (!(r.sd > 0.0)) {
    r.degenerate = true;
    r.t = 0.0;
    r.p = std::numeric_limits<double>::quiet_NaN();
    r.ci_lo = r.ci_hi = r.mean;
    return r;
  }
  const double se = r.sd / std::sqrt(static_cast<double>(n));
  const double nu = static_cast<double>(n - 1);
  r.t = r.mean / se;
  r.p = student_t_two_sided_p(r.t, nu);
  const double tq = student_t_quantile(0.975, nu);
  r.ci_lo = r.mean - tq * se;
  r.ci_hi = r.mean + tq * se;
  return r;
}

WilcoxonResult wilcoxon(std::span<const double> d) { return wilcoxon_with(d, 0); }
WilcoxonResult wilcoxon_exact(std::span<const double> d) { return wilcoxon_with(d, 1); }
WilcoxonResult wilcoxon_normal(std::span<const double> d) { return wilcoxon_with(d, 2); }

EffectSizes effect_sizes(std::span<const double> d) {
  EffectSizes e;
  const TTestResult t = paired_t(d);
  if (t.degenerate) {
    e.degenerate = true;
  } else {
    e.cohen_d = t.mean / t.sd;
  }
  const WilcoxonResult w = wilcoxon(d);
  const double w_total = w.w_plus + w.w_minus;
  e.rank_biserial = w_total > 0.0 ? (w.w_plus - w.w_minus) / w_total : 0.0;
  return e;
}

namespace {

// (delta, realisation) -> per-method record index; throws on unpaired rows.
std::map<std::pair<double, int>, std::pair<int, int>> pair_index(
    const std::vector<ErrorRecord>& records) {
  std::map<std::pair<double, int>, std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    auto& slot = pairs.try_emplace({r.delta, r.realisation}, std::pair<int, int>{-1, -1})
                     .first->second;
    if (r.method == "sg")
      slot.first = static_cast<int>(i);
    else if (r.method == "klo")
      slot.second = static_cast<int>(i);
    else
      throw ParamError("summarize: unknown method tag '" + r.method + "'");
  }
  for (const auto& [key, slot] : pairs)
    if (slot.first < 0 || slot.second < 0)
      throw ParamError("summarize: unpaired realisation " + std::to_string(key.second) +
                       " at delta " + std::to_string(key.first));
  return pairs;
}

double metric_value(const ErrorRecord& r, const std::string& m) {
  if (m == "l2_abs") return r.l2_abs;
  if (m == "l2_rel") return r.l2_rel;
  if (m == "h1_abs") return r.h1_abs;
  return r.h1_rel;
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {"l2_abs", "l2_rel", "h1_abs", "h1_rel"};
  return names;
}

}  // namespace

std::vector<PairedSample> paired_samples(const std::vector<ErrorRecord>& records) {
  const auto pairs = pair_index(records);
  std::vector<double> deltas;
  for (const auto& [key, slot] : pairs)
    if (deltas.empty() || deltas.back() != key.first) deltas.push_back(key.first);
  std::vector<PairedSample> out;
  for (double delta : deltas) {
    for (const auto& metric : metric_names()) {
      PairedSample ps;
      ps.delta = delta;
      ps.metric = metric;
      for (const auto& [key, slot] : pairs) {
        if (key.first != delta) continue;
        ps.d.push_back(metric_value(records[static_cast<std::size_t>(slot.second)], metric) -
                       metric_value(records[static_cast<std::size_t>(slot.first)], metric));
      }
      out.push_back(std::move(ps));
    }
  }
  return out;
}

std::vector<StatReport> summarize(const std::vector<ErrorRecord>& records) {
  const auto pairs = pair_index(records);
  const std::vector<std::string>& metrics = metric_names();

  std::vector<double> deltas;
  for (const auto& [key, slot] : pairs)
    if (deltas.empty() || deltas.back() != key.first) deltas.push_back(key.first);

  std::vector<StatReport> out;
  for (double delta : deltas) {
    for (const auto& metric : metrics) {
      StatReport rep;
      rep.delta = delta;
      rep.metric = metric;
      std::vector<double> e_sg, e_klo, d;
      for (const auto& [key, slot] : pairs) {
        if (key.first != delta) continue;
        e_sg.push_back(metric_value(records[static_cast<std::size_t>(slot.first)], metric));
        e_klo.push_back(metric_value(records[static_cast<std::size_t>(slot.second)], metric));
        d.push_back(e_klo.back() - e_sg.back());
      }
      rep.n = d.size();
      if (rep.n == 0) throw ParamError("summarize: no paired realisations");
      for (std::size_t i = 0; i < rep.n; ++i) {
        rep.mean_sg += e_sg[i];
        rep.mean_klo += e_klo[i];
        rep.win_rate_klo += d[i] < 0.0 ? 1.0 : (d[i] == 0.0 ? 0.5 : 0.0);
      }
      rep.mean_sg /= static_cast<double>(rep.n);
      rep.mean_klo /= static_cast<double>(rep.n);
      rep.win_rate_klo /= static_cast<double>(rep.n);
      rep.ratio = rep.mean_sg != 0.0 ? rep.mean_klo / rep.mean_sg
                                     : std::numeric_limits<double>::quiet_NaN();

      if (rep.n == 1) {  // a single pair carries no test statistics
        rep.mean_diff = rep.ci_lo = rep.ci_hi = d[0];
        rep.p_t = rep.p_wilcoxon = std::numeric_limits<double>::quiet_NaN();
        rep.cohen_d = std::numeric_limits<double>::quiet_NaN();
        rep.rank_biserial = d[0] == 0.0 ? 0.0 : (d[0] > 0.0 ? 1.0 : -1.0);
        rep.degenerate = true;
        out.push_back(std::move(rep));
        continue;
      }
      const TTestResult t = paired_t(d);
      rep.mean_diff = t.mean;
      rep.ci_lo = t.ci_lo;
      rep.ci_hi = t.ci_hi;
      rep.t_stat = t.t;
      rep.p_t = t.p;
      const WilcoxonResult w = wilcoxon(d);
      rep.w_plus = w.w_plus;
      rep.w_minus = w.w_minus;
      rep.p_wilcoxon = w.degenerate ? std::numeric_limits<double>::quiet_NaN() : w.p;
      const EffectSizes es = effect_sizes(d);
      rep.cohen_d = es.degenerate ? std::numeric_limits<double>::quiet_NaN() : es.cohen_d;
      rep.rank_biserial = es.rank_biserial;
      rep.degenerate = t.degenerate || w.degenerate;
      out.push_back(std::move(rep));
    }
  }
  return out;
}

void save_table8_csv(const std::vector<StatReport>& reports, const std::string& path) {
  csv::Writer w(path);
  w.header(
      "delta,metric,mean_sg,mean_klo,ratio,win_rate,p_t,p_wilcoxon,cohen_d,r_rb,ci_lo,ci_hi");
  for (const auto& r : reports)
    w.row({csv::format_double(r.delta), r.metric, csv::format_double(r.mean_sg),
           csv::format_double(r.mean_klo), csv::format_double(r.ratio),
           csv::format_double(r.win_rate_klo), csv::format_double(r.p_t),
           csv::format_double(r.p_wilcoxon), csv::format_double(r.cohen_d),
           csv::format_double(r.rank_biserial), csv::format_double(r.ci_lo),
           csv::format_double(r.ci_hi)});
}

void save_report_json(const std::vector<StatReport>& reports, const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& meta) {
  nlohmann::json j;
  for (const auto& [k, v] : meta) j["meta"][k] = v;
  j["reports"] = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json e;
    e["delta"] = r.delta;
    e["metric"] = r.metric;
    e["n"] = r.n;
    e["mean_sg"] = r.mean_sg;
    e["mean_klo"] = r.mean_klo;
    e["ratio"] = r.ratio;
    e["mean_diff"] = r.mean_diff;
    e["ci95"] = {r.ci_lo, r.ci_hi};
    e["t"] = r.t_stat;
    e["p_t"] = r.p_t;
    e["w_plus"] = r.w_plus;
    e["w_minus"] = r.w_minus;
    e["p_wilcoxon"] = r.p_wilcoxon;
    e["cohen_d"] = r.cohen_d;
    e["rank_biserial"] = r.rank_biserial;
    e["win_rate_klo"] = r.win_rate_klo;
    e["degenerate"] = r.degenerate;
    j["reports"].push_back(std::move(e));
  }
  std::ofstream out(path);
  if (!out) throw RangeError("save_report_json: cannot open '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace webrec
