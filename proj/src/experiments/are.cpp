#include <cmath>
#include <limits>

#include "lrdcp/error.hpp"
#include "lrdcp/experiments.hpp"

namespace lrdcp::experiments {

double gaussian_ratio_r() {
  using subordinate::normal_pdf;
  const double lim = subordinate::kIntegrationCutoff;
  const double num = subordinate::integrate([](double x) { return std::pow(normal_pdf(x), 3) * x * x; }, -lim, lim);
  const double den = subordinate::integrate([](double x) { return std::pow(normal_pdf(x), 3); }, -lim, lim);
  return num / den;
}

double fstar(double c1, double c2, double q, double tau, double kappa1, double kappa2, double step) {
  if (!(c1 > 0.0)) throw DomainError("fstar requires C1 > 0");
  if (!(c2 >= 0.0)) throw DomainError("fstar requires C2 >= 0");
  if (!(q > 0.0)) throw DomainError("fstar requires q > 0");
  if (!(kappa1 > 0.0 && kappa1 < 0.5 && kappa2 > 0.5 && kappa2 < 1.0))
    throw DomainError("fstar requires 0 < kappa1 < 1/2 < kappa2 < 1");
  if (!(step > 0.0)) throw DomainError("fstar requires a positive grid step");
  static const double r = gaussian_ratio_r();
  const double quad = c1 * c1 + c2 * c2 * r;
  const auto steps = static_cast<std::size_t>(std::floor((kappa2 - kappa1) / step + 1e-9));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= steps + 1; ++i) {
    const double t = i <= steps ? kappa1 + static_cast<double>(i) * step : kappa2;
    const double psi = calibrate::psi_tau(t, tau);
    // (sqrt(R) - q)/psi rewritten as (R - q^2)/(psi (sqrt(R) + q)); for C2 = 0
    // the radicand is the perfect square (q + C1 psi)^2.
    const double root = c2 == 0.0 ? q + c1 * psi : std::sqrt(q * q + 2.0 * q * c1 * psi + quad * psi * psi);
    const double denom = root + q;
    const double value = c1 * (((q + c1 * psi) + q) / denom) + c2 * c2 * r * psi / denom;
    best = std::min(best, value);
  }
  return best;
}

double are_mean_variance(double c1_star, double c2_star, double q, double tau, double kappa1, double kappa2,
                         double hurst) {
  if (!(c1_star > 0.0 && c2_star > 0.0)) throw DomainError("are_mean_variance requires C1*, C2* > 0");
  if (!(hurst > 0.5 && hurst < 1.0)) throw DomainError("are_mean_variance requires 1/2 < H < 1");
  const double ratio = c2_star / c1_star;
  auto f = [&](double c1) { return fstar(c1, c1 * ratio, q, tau, kappa1, kappa2); };
  double lo = 0.0;
  double hi = c1_star;
  if (f(hi) < c1_star) throw NumericError("are_mean_variance: root not bracketed in (0, C1*]");
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < c1_star) lo = mid;
    else hi = mid;
  }
  const double c1 = 0.5 * (lo + hi);
  return std::pow(c1_star / c1, 1.0 / (1.0 - hurst));
}

MeanShiftCheck are_mean_shift_check(double hurst, double tau, double c, double alpha, std::size_t reps,
                                    std::uint64_t seed, std::size_t n) {
  MeanShiftCheck out;
  out.n = n;
  const double limit = calibrate::asymptotic_power(c, tau, hurst, alpha, reps, derive_seed(seed, {0x6c696dULL}));
  out.limit_power.fill(limit);
  // The local alternative mu_n = C d_n / n at this n.
  out.mu = c * std::pow(static_cast<double>(n), hurst - 1.0);
  PowerConfig cfg;
  cfg.scenario = out.mu == 0.0 ? "null" : "meanshift";
  cfg.statistics.assign(stats::kAllStatistics.begin(), stats::kAllStatistics.end());
  cfg.hurst_modes = {calibrate::HurstSource::Known};
  cfg.ns = {n};
  cfg.hursts = {hurst};
  cfg.tau = tau;
  cfg.mu = out.mu;
  cfg.alpha = alpha;
  cfg.reps = std::max<std::size_t>(reps, 100);
  cfg.calib_reps = std::max<std::size_t>(reps, 100);
  cfg.seed = derive_seed(seed, {0x66696eULL});
  const auto table = run_power_study(cfg);
  for (const auto& row : table.rows) out.finite_power[static_cast<std::size_t>(row.kind)] = row.rate;
  return out;
}

}  // namespace lrdcp::experiments
