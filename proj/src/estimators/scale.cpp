#include <cmath>

#include "lrdcp/error.hpp"
#include "lrdcp/estimators.hpp"

namespace lrdcp::estimators {

std::size_t default_scale_lags(std::size_t n) {
  auto k = static_cast<std::size_t>(std::cbrt(static_cast<double>(n)));
  while ((k + 1) * (k + 1) * (k + 1) <= n) ++k;
  while (k > 0 && k * k * k > n) --k;
  return k;
}

std::vector<double> sample_autocov(std::span<const double> values, std::size_t max_lag) {
  const std::size_t n = values.size();
  if (max_lag >= n) throw DomainError("sample_autocov: lag must be below n");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> out(max_lag + 1, 0.0);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    double s = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) s += (values[t] - mean) * (values[t + k] - mean);
    out[k] = s / static_cast<double>(n);
  }
  return out;
}

double scale_constant_from_autocov(std::span<const double> rho, double hurst, std::size_t lags) {
  if (lags < 1 || rho.size() <= lags) throw DomainError("scale constant needs rho(0..K) with K >= 1");
  double s = 0.0;
  for (std::size_t k = 1; k <= lags; ++k) s += rho[k] * std::pow(static_cast<double>(k), 2.0 - 2.0 * hurst);
  return std::max(kScaleFloor, s / static_cast<double>(lags));
}

ScaleEstimate estimate_scale(std::span<const double> values, const HurstEstimate& hurst, const ScaleOptions& options) {
  const std::size_t n = values.size();
  const std::size_t lags = options.lags.value_or(std::max<std::size_t>(1, default_scale_lags(n)));
  if (lags < 1 || 4 * lags > n) throw DomainError("scale estimation requires 1 <= K <= n/4");
  const double h = hurst.value;
  auto gamma = sample_autocov(values, lags);
  if (options.mean_correction) {
    const double v = std::pow(static_cast<double>(n), 2.0 * h - 2.0);
    const double shift = gamma[0] * v / (1.0 - v);
    for (double& g : gamma) g += shift;
  }
  if (options.standardize && gamma[0] > 0.0) {
    const double g0 = gamma[0];
    for (double& g : gamma) g /= g0;
  }
  ScaleEstimate out;
  out.lags = lags;
  out.c_hat = scale_constant_from_autocov(gamma, h, lags);
  out.d_hat_n = subordinate::normalization_estimated(n, h, out.c_hat).value;
  return out;
}

ScaleEstimate estimate_scale(const sim::TimeSeries& series, const HurstEstimate& hurst, const ScaleOptions& options) {
  return estimate_scale(series.values(), hurst, options);
}

}  // namespace lrdcp::estimators
