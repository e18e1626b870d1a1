#include <cmath>
#include <numbers>

#include "json.hpp"
#include "lrdcp/calibrate.hpp"
#include "lrdcp/error.hpp"

namespace lrdcp::calibrate {

std::string to_string(CalibrationMode mode) { return mode == CalibrationMode::MonteCarlo ? "mc" : "asymptotic"; }

std::string to_string(HurstSource source) {
  switch (source) {
    case HurstSource::Known: return "known";
    case HurstSource::Whittle: return "whittle";
    case HurstSource::Split: return "split";
  }
  return "?";
}

CalibrationMode parse_calibration_mode(const std::string& name) {
  if (name == "mc") return CalibrationMode::MonteCarlo;
  if (name == "asymptotic") return CalibrationMode::Asymptotic;
  throw DomainError("unknown calibration mode '" + name + "' (expected mc or asymptotic)");
}

HurstSource parse_hurst_source(const std::string& name) {
  if (name == "known") return HurstSource::Known;
  if (name == "whittle") return HurstSource::Whittle;
  if (name == "split") return HurstSource::Split;
  throw DomainError("unknown Hurst mode '" + name + "' (expected known, whittle or split)");
}

double asymptotic_constant(stats::StatisticKind kind) {
  switch (kind) {
    case stats::StatisticKind::Ks: return subordinate::normal_pdf(0.0);
    case stats::StatisticKind::Cvm: return 1.0 / (2.0 * std::numbers::pi * std::sqrt(3.0));
    case stats::StatisticKind::Cusum: return 1.0;
    case stats::StatisticKind::Wilcoxon: return 1.0 / (2.0 * std::sqrt(std::numbers::pi));
  }
  return 1.0;
}

stats::TestReport perform_test(std::span<const double> values, const TestOptions& opt) {
  const std::size_t n = values.size();
  if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const auto raw = stats::raw_statistic(opt.kind, values);

  double h = 0.0;
  switch (opt.hurst_source) {
    case HurstSource::Known:
      if (!opt.hurst) throw DomainError("a known-H test needs the Hurst coefficient");
      h = *opt.hurst;
      if (!(h > 0.5 && h < 1.0)) throw DomainError("long-memory condition 1/2 < H < 1 violated: H=" + std::to_string(h));
      break;
    case HurstSource::Whittle: h = estimators::local_whittle(values).value; break;
    case HurstSource::Split: h = estimators::split_whittle(values, opt.kind).value; break;
  }

  // Normalization of the fGn(H) null and the one applied to this series.
  const double d_null = std::pow(static_cast<double>(n), h);
  subordinate::Normalization norm;
  if (opt.scale_correction) {
    estimators::HurstEstimate est;
    est.value = h;
    est.raw_value = h;
    estimators::ScaleOptions so;
    so.standardize = stats::rank_based(opt.kind);
    const auto sc = estimators::estimate_scale(values, est, so);
    norm = subordinate::normalization_estimated(n, h, sc.c_hat);
  } else if (opt.hurst_source == HurstSource::Known) {
    norm = subordinate::normalization_dn(n, 1, sim::GaussianModel::fgn(h), subordinate::default_source(n));
  } else {
    norm = subordinate::normalization_estimated(n, h, h * (2.0 * h - 1.0));
  }
  const int p = stats::normalization_power(opt.kind);
  const double extra = opt.kind == stats::StatisticKind::Wilcoxon ? static_cast<double>(n) : 1.0;
  const double divisor = std::pow(norm.value, p) * extra;

  double critical = 0.0;
  if (opt.calibration == CalibrationMode::MonteCarlo) {
    std::optional<double> q;
    if (opt.table) q = opt.table->lookup(opt.kind, n, h, opt.alpha);
    if (!q && opt.cache) q = opt.cache->critical(opt.kind, n, h, opt.alpha);
    if (!q) {
      const double a[] = {opt.alpha};
      q = mc_critical_values(opt.kind, n, h, a, opt.reps, opt.seed).front().value;
    }
    const double null_divisor = (opt.scale_correction ? std::pow(d_null, p) : std::pow(norm.value, p)) * extra;
    critical = *q / null_divisor;
  } else {
    const double q = limit_quantile(1, h, opt.alpha, opt.limit_grid, opt.limit_reps, opt.seed);
    critical = asymptotic_constant(opt.kind) * std::pow(q, p);
  }

  stats::TestReport report;
  report.kind = opt.kind;
  report.raw_value = raw.raw_value;
  report.normalization = norm;
  report.normalized_value = raw.raw_value / divisor;
  report.critical_value = critical;
  report.alpha = opt.alpha;
  report.reject = report.normalized_value > critical;
  report.k_hat = raw.argmax_k;
  report.hurst_used = h;
  return report;
}

std::string report_to_json(const stats::TestReport& r) {
  nlohmann::ordered_json j;
  j["kind"] = stats::to_string(r.kind);
  j["raw_value"] = r.raw_value;
  nlohmann::ordered_json norm;
  norm["n"] = r.normalization.n;
  norm["m"] = r.normalization.m;
  norm["H"] = r.normalization.hurst;
  norm["L_const"] = r.normalization.l_const;
  norm["value"] = r.normalization.value;
  norm["source"] = subordinate::to_string(r.normalization.source);
  j["normalization"] = norm;
  j["normalized_value"] = r.normalized_value;
  j["critical_value"] = r.critical_value;
  j["alpha"] = r.alpha;
  j["reject"] = r.reject;
  j["k_hat"] = r.k_hat;
  j["hurst_used"] = r.hurst_used;
  return j.dump(2) + "\n";
}

}  // namespace lrdcp::calibrate
