#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "lrdcp/error.hpp"
#include "lrdcp/estimators.hpp"
#include "lrdcp/experiments.hpp"

namespace lrdcp::experiments {
namespace {

using stats::StatisticKind;

CheckResult check(const std::string& suite, const std::string& name, bool passed, double measured, double threshold,
                  std::string detail = {}) {
  return {suite, name, passed, measured, threshold, std::move(detail)};
}

std::vector<double> normal_series(std::size_t n, Rng& rng) {
  std::normal_distribution<double> z;
  std::vector<double> v(n);
  for (auto& x : v) x = z(rng);
  return v;
}

// O(n^3) enumerations straight from the definitions.
double brute_ks(std::span<const double> y) {
  const std::size_t n = y.size();
  double best = 0.0;
  for (std::size_t k = 1; k < n; ++k)
    for (double x : y) {
      double left = 0.0;
      double all = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (y[i] <= x) {
          all += 1.0;
          if (i < k) left += 1.0;
        }
      }
      best = std::max(best, std::abs(left - static_cast<double>(k) / static_cast<double>(n) * all));
    }
  return best;
}

double brute_cvm(std::span<const double> y) {
  const std::size_t n = y.size();
  double best = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    double s = 0.0;
    for (double x : y) {
      double left = 0.0;
      double all = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (y[i] <= x) {
          all += 1.0;
          if (i < k) left += 1.0;
        }
      }
      const double dk = left - static_cast<double>(k) / static_cast<double>(n) * all;
      s += dk * dk;
    }
    best = std::max(best, s / static_cast<double>(n));
  }
  return best;
}

double brute_wilcoxon(std::span<const double> y) {
  const std::size_t n = y.size();
  double best = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = k; j < n; ++j) s += (y[i] <= y[j] ? 1.0 : 0.0) - 0.5;
    best = std::max(best, std::abs(s));
  }
  return best;
}

std::vector<CheckResult> suite_sim(const VerifyOptions& o) {
  const std::string s = "sim";
  std::vector<CheckResult> out;
  const std::pair<std::size_t, double> cases[] = {{64, 0.6}, {512, 0.75}, {4096, 0.9}};
  for (auto [n, h] : cases) {
    const auto rho = sim::model_autocov_sequence(sim::GaussianModel::fgn(h), n);
    const double d2 = subordinate::exact_dn_squared(rho, n, 1);
    const double rel = std::abs(d2 / std::pow(static_cast<double>(n), 2.0 * h) - 1.0);
    std::ostringstream name;
    name << "partial_sum_variance n=" << n << " H=" << h;
    out.push_back(check(s, name.str(), rel < 1e-9, rel, 1e-9));
  }
  const std::size_t reps = o.reps ? o.reps : 500;
  const std::size_t n = o.ns.empty() ? 512 : o.ns.front();
  const sim::GaussianModel models[] = {sim::GaussianModel::fgn(0.8), sim::GaussianModel::farima00(0.2),
                                       sim::GaussianModel::farima10(0.2, 0.4), sim::GaussianModel::ar1(0.6)};
  for (const auto& model : models) {
    std::vector<std::vector<double>> acov(reps);
    parallel_for(reps, [&](std::size_t r) {
      const auto x = sim::simulate(model, n, {o.seed, r});
      // The mean is known to be zero, so lag products are unbiased.
      acov[r].assign(6, 0.0);
      for (std::size_t k = 0; k <= 5; ++k) {
        double sum = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) sum += x[t] * x[t + k];
        acov[r][k] = sum / static_cast<double>(n - k);
      }
    });
    double worst = 0.0;
    for (std::size_t k = 0; k <= 5; ++k) {
      double m = 0.0;
      double m2 = 0.0;
      for (const auto& a : acov) {
        m += a[k];
        m2 += a[k] * a[k];
      }
      m /= static_cast<double>(reps);
      const double se = std::sqrt(std::max(m2 / static_cast<double>(reps) - m * m, 1e-300) / static_cast<double>(reps));
      worst = std::max(worst, std::abs(m - sim::model_autocov(model, static_cast<long>(k))) / se);
    }
    out.push_back(check(s, "autocov_fidelity " + model.describe(), worst < 3.0, worst, 3.0, "max |z| over lags 0..5"));
  }
  const auto a = sim::simulate(sim::GaussianModel::fgn(0.7), 300, {o.seed, 3});
  const auto b = sim::simulate(sim::GaussianModel::fgn(0.7), 300, {o.seed, 3});
  const bool same = std::equal(a.values().begin(), a.values().end(), b.values().begin());
  out.push_back(check(s, "determinism", same, same ? 0.0 : 1.0, 0.0));
  return out;
}

std::vector<CheckResult> suite_hermite(const VerifyOptions&) {
  using namespace subordinate;
  const std::string s = "hermite";
  std::vector<CheckResult> out;
  double worst1 = 0.0;
  double worst2 = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = -5.0 + 10.0 * i / 200.0;
    worst1 = std::max(worst1, std::abs(hermite_coeff(Subordinator::identity(), 1, x).value + normal_pdf(x)));
    const double xs = 10.0 * i / 200.0;
    worst2 = std::max(worst2, std::abs(hermite_coeff(Subordinator::square(), 2, xs).value +
                                       2.0 * std::sqrt(xs) * normal_pdf(std::sqrt(xs))));
  }
  out.push_back(check(s, "J1_identity_closed_form", worst1 < 1e-8, worst1, 1e-8));
  out.push_back(check(s, "J2_square_closed_form", worst2 < 1e-8, worst2, 1e-8));
  const std::pair<Subordinator, int> ranks[] = {
      {Subordinator::identity(), 1}, {Subordinator::square(), 2}, {Subordinator::split_square(1.1, 1.0), 1}};
  for (const auto& [g, m] : ranks) {
    const int got = hermite_rank(g, 4).rank;
    out.push_back(check(s, "rank " + g.name(), got == m, got, m));
  }
  for (const auto& g : {Subordinator::square(), Subordinator::split_square(1.1, 1.0), Subordinator::identity()}) {
    const auto info = hermite_rank(g, 4);
    const auto grid = quantile_grid(g, 41);
    double excess = -1.0;
    for (double x : grid) {
      const double f = g.marginal_cdf(x);
      double sum = 0.0;
      for (int q = info.rank; q <= 20; ++q) {
        const double j = hermite_coeff(g, q, x).value;
        sum += j * j / factorial(q);
      }
      excess = std::max(excess, sum - f * (1.0 - f));
    }
    out.push_back(check(s, "parseval_bound " + g.name(), excess <= 1e-8, excess, 1e-8));
  }
  return out;
}

std::vector<CheckResult> suite_stats(const VerifyOptions& o) {
  const std::string s = "stats";
  std::vector<CheckResult> out;
  Rng rng(derive_seed(o.seed, {0x7374ULL}));
  std::size_t mismatched = 0;
  std::size_t cusum_same = 0;
  for (int r = 0; r < 100; ++r) {
    const auto y = normal_series(50, rng);
    std::vector<double> e(y.size());
    std::transform(y.begin(), y.end(), e.begin(), [](double v) { return std::exp(v); });
    for (auto kind : {StatisticKind::Ks, StatisticKind::Cvm, StatisticKind::Wilcoxon})
      if (stats::raw_statistic(kind, y).raw_value != stats::raw_statistic(kind, e).raw_value) ++mismatched;
    if (stats::raw_statistic(StatisticKind::Cusum, y).raw_value == stats::raw_statistic(StatisticKind::Cusum, e).raw_value)
      ++cusum_same;
  }
  out.push_back(check(s, "monotone_invariance_rank_statistics", mismatched == 0, static_cast<double>(mismatched), 0.0));
  out.push_back(check(s, "cusum_not_invariant", cusum_same <= 1, static_cast<double>(cusum_same), 1.0));
  double worst = 0.0;
  std::uniform_int_distribution<int> len(2, 12);
  std::uniform_int_distribution<int> coarse(0, 4);
  for (int r = 0; r < 200; ++r) {
    auto y = normal_series(static_cast<std::size_t>(len(rng)), rng);
    if (r % 4 == 0)
      for (auto& v : y) v = coarse(rng);  // exercise ties
    worst = std::max(worst, std::abs(stats::raw_statistic(StatisticKind::Ks, y).raw_value - brute_ks(y)));
    worst = std::max(worst, std::abs(stats::raw_statistic(StatisticKind::Cvm, y).raw_value - brute_cvm(y)));
    worst = std::max(worst, std::abs(stats::raw_statistic(StatisticKind::Wilcoxon, y).raw_value - brute_wilcoxon(y)));
  }
  out.push_back(check(s, "brute_force_equivalence", worst <= 1e-12, worst, 1e-12));
  double rev = 0.0;
  for (int r = 0; r < 50; ++r) {
    auto y = normal_series(40, rng);
    auto z = y;
    std::reverse(z.begin(), z.end());
    for (auto kind : stats::kAllStatistics) {
      const double a = stats::raw_statistic(kind, y).raw_value;
      const double b = stats::raw_statistic(kind, z).raw_value;
      rev = std::max(rev, std::abs(a - b) / std::max(1.0, a));
    }
  }
  out.push_back(check(s, "reversal_symmetry", rev < 1e-12, rev, 1e-12));
  return out;
}

std::vector<CheckResult> suite_estimators(const VerifyOptions& o) {
  const std::string s = "estimators";
  std::vector<CheckResult> out;
  const std::size_t reps = o.reps ? o.reps : 200;
  const std::size_t n = o.ns.empty() ? 1000 : o.ns.front();
  for (double h : {0.6, 0.8}) {
    std::vector<double> est(reps);
    parallel_for(reps, [&](std::size_t r) {
      est[r] = estimators::local_whittle(sim::simulate(sim::GaussianModel::fgn(h), n, {o.seed, r}).values()).raw_value;
    });
    double m = 0.0;
    for (double e : est) m += e;
    m /= static_cast<double>(reps);
    std::ostringstream name;
    name << "whittle_mean H=" << h << " n=" << n;
    out.push_back(check(s, name.str(), std::abs(m - h) <= 0.03, m, 0.03, "|mean - H| <= threshold"));
  }
  std::vector<double> c(reps);
  parallel_for(reps, [&](std::size_t r) {
    const auto x = sim::simulate(sim::GaussianModel::fgn(0.8), 2000, {o.seed + 1, r});
    const auto h = estimators::local_whittle(x);
    c[r] = estimators::estimate_scale(x, h).c_hat;
  });
  double m = 0.0;
  for (double v : c) m += v;
  m /= static_cast<double>(reps);
  out.push_back(check(s, "scale_constant fGn(0.8) n=2000", std::abs(m / 0.48 - 1.0) <= 0.15, m, 0.15,
                      "relative error to H(2H-1) = 0.48"));
  return out;
}

std::vector<CheckResult> suite_reduction(const VerifyOptions& o) {
  const std::string s = "reduction";
  std::vector<CheckResult> out;
  const std::vector<std::size_t> ns = o.ns.empty() ? std::vector<std::size_t>{256, 1024, 4096} : o.ns;
  const std::size_t reps = o.reps ? o.reps : 200;
  const auto model = sim::GaussianModel::fgn(0.9);
  const auto g = subordinate::Subordinator::square();
  double prev = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  std::ostringstream detail;
  for (std::size_t n : ns) {
    const double r = subordinate::reduction_residual(model, g, 2, n, reps, o.seed);
    detail << "n=" << n << ":" << r << " ";
    decreasing = decreasing && r < prev;
    prev = r;
    out.push_back(check(s, "residual n=" + std::to_string(n), true, r, 0.0));
  }
  out.push_back(check(s, "residual_strictly_decreasing", decreasing, prev, 0.0, detail.str()));
  return out;
}

std::vector<CheckResult> suite_calibrate(const VerifyOptions& o) {
  const std::string s = "calibrate";
  std::vector<CheckResult> out;
  const std::size_t reps = o.reps ? o.reps : 10000;
  Rng rng(derive_seed(o.seed, {0x6272ULL}));
  bool zero = true;
  for (double h : {0.5, 0.7}) {
    const auto p = calibrate::limit_bridge_path(1, h, 256, rng);
    zero = zero && p.front() == 0.0 && p.back() == 0.0;
  }
  const auto p2 = calibrate::limit_bridge_path(2, 0.8, 128, rng);
  zero = zero && p2.front() == 0.0 && p2.back() == 0.0;
  out.push_back(check(s, "bridge_endpoints_zero", zero, zero ? 0.0 : 1.0, 0.0));
  const auto sample = calibrate::limit_functional(1, 0.5, 4096, reps, std::nullopt, o.seed);
  std::size_t hits = 0;
  for (double v : sample.values) hits += v > 1.358 ? 1 : 0;
  double oracle = 0.0;
  for (int k = 1; k <= 100; ++k) oracle += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * 1.358 * 1.358);
  const double rate = static_cast<double>(hits) / static_cast<double>(reps);
  out.push_back(check(s, "brownian_bridge_tail", std::abs(rate - oracle) <= 0.01, rate, 0.01,
                      "Kolmogorov series value " + std::to_string(oracle)));
  const double size = calibrate::asymptotic_power(0.0, 0.5, 0.7, 0.05, reps, o.seed);
  out.push_back(check(s, "asymptotic_power_null", std::abs(size - 0.05) <= 0.01, size, 0.01));
  return out;
}

std::vector<CheckResult> suite_are(const VerifyOptions&) {
  const std::string s = "are";
  std::vector<CheckResult> out;
  const double r = gaussian_ratio_r();
  out.push_back(check(s, "gaussian_ratio", std::abs(r - 1.0 / 3.0) < 1e-8, r, 1e-8));
  const double f0 = fstar(1.3, 0.0, 2.0, 0.5, 0.1, 0.9);
  out.push_back(check(s, "fstar_c2_zero", f0 == 1.3, f0, 1.3));
  const double f1 = fstar(1.3, 0.5, 2.0, 0.5, 0.1, 0.9);
  out.push_back(check(s, "fstar_exceeds_c1", f1 > 1.3, f1, 1.3));
  const double are1 = are_mean_variance(1.0, 1.0, 1.0, 0.5, 0.1, 0.9, 0.7);
  out.push_back(check(s, "are_above_one", are1 > 1.0, are1, 1.0));
  const double are0 = are_mean_variance(1.0, 1e-6, 1.0, 0.5, 0.1, 0.9, 0.7);
  out.push_back(check(s, "are_limit_one", std::abs(are0 - 1.0) <= 1e-3, are0, 1e-3));
  return out;
}

}  // namespace

std::vector<std::string> verify_suites() {
  return {"sim", "hermite", "stats", "estimators", "reduction", "calibrate", "are", "all"};
}

std::vector<CheckResult> run_verify(const std::string& suite, const VerifyOptions& o) {
  if (suite == "sim") return suite_sim(o);
  if (suite == "hermite") return suite_hermite(o);
  if (suite == "stats") return suite_stats(o);
  if (suite == "estimators") return suite_estimators(o);
  if (suite == "reduction") return suite_reduction(o);
  if (suite == "calibrate") return suite_calibrate(o);
  if (suite == "are") return suite_are(o);
  if (suite == "all") {
    std::vector<CheckResult> all;
    for (const auto& name : verify_suites()) {
      if (name == "all") continue;
      auto part = run_verify(name, o);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw DomainError("unknown verify suite '" + suite +
                    "' (expected sim, hermite, stats, estimators, reduction, calibrate, are or all)");
}

std::string verify_to_json(const std::vector<CheckResult>& results) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["check"] = r.name;
    j["passed"] = r.passed;
    j["measured"] = r.measured;
    j["threshold"] = r.threshold;
    if (!r.detail.empty()) j["detail"] = r.detail;
    doc.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

}  // namespace lrdcp::experiments
