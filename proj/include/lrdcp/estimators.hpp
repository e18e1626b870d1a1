#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrdcp/sim.hpp"
#include "lrdcp/stats.hpp"

namespace lrdcp::estimators {

enum class HurstMethod { Whittle, SplitWhittle };

std::string to_string(HurstMethod method);
HurstMethod parse_hurst_method(const std::string& name);

/// Lower clamp applied to every Hurst estimate.
inline constexpr double kHurstFloor = 0.501;

struct HurstEstimate {
  double value = kHurstFloor;  // max(raw_value, 0.501)
  double raw_value = 0.5;
  HurstMethod method = HurstMethod::Whittle;
  std::size_t bandwidth = 0;
  std::optional<std::size_t> split_k;
  /// Set when a split segment was too short and the whole series was used.
  bool fallback = false;
};

struct PeriodogramPoint {
  double frequency;
  double ordinate;
};

/// I(lambda_j) = |sum_t Y_t e^{-i t lambda_j}|^2 / (2 pi n), lambda_j = 2 pi j / n, j = 1..n/2.
std::vector<PeriodogramPoint> periodogram(std::span<const double> values);
std::vector<PeriodogramPoint> periodogram(const sim::TimeSeries& series);

/// floor(n^{2/3}), computed in exact integer arithmetic.
std::size_t default_bandwidth(std::size_t n);

/// Profiled local Whittle objective over the first `bandwidth` ordinates.
double whittle_objective(std::span<const PeriodogramPoint> pgram, std::size_t bandwidth, double hurst);

/// Golden-section minimizer of the objective on [0.01, 0.99].
HurstEstimate local_whittle(std::span<const double> values, std::optional<std::size_t> bandwidth = std::nullopt);
HurstEstimate local_whittle(const sim::TimeSeries& series, std::optional<std::size_t> bandwidth = std::nullopt);

/// (k/n) H_1 + ((n-k)/n) H_2 with H_1, H_2 the local Whittle estimates of
/// the two segments split at k, each with its own default bandwidth.
HurstEstimate split_whittle_at(std::span<const double> values, std::size_t k);

/// split_whittle_at with k the change-point estimate of `kind`.
HurstEstimate split_whittle(std::span<const double> values, stats::StatisticKind kind);
HurstEstimate split_whittle(const sim::TimeSeries& series, stats::StatisticKind kind);

struct ScaleOptions {
  std::optional<std::size_t> lags;  // K; default floor(n^{1/3})
  /// Adds back the long-memory bias of the sample mean, gamma(0) n^{2H-2},
  /// to the sample autocovariances.
  bool mean_correction = true;
  /// Use autocorrelations (series scaled to unit variance) instead of autocovariances.
  bool standardize = false;
};

struct ScaleEstimate {
  double c_hat = 1e-6;
  std::size_t lags = 1;
  double d_hat_n = 1.0;
};

inline constexpr double kScaleFloor = 1e-6;

/// floor(n^{1/3}), computed in exact integer arithmetic.
std::size_t default_scale_lags(std::size_t n);

/// max(1e-6, (1/K) sum_{k=1}^K rho(k) k^{2-2H}); rho must hold lags 0..K.
double scale_constant_from_autocov(std::span<const double> rho, double hurst, std::size_t lags);

/// Biased (divisor n) sample autocovariances at lags 0..max_lag.
std::vector<double> sample_autocov(std::span<const double> values, std::size_t max_lag);

/// C-hat and the estimated normalization n^H (C/(H(2H-1)))^{1/2}.
ScaleEstimate estimate_scale(std::span<const double> values, const HurstEstimate& hurst, const ScaleOptions& options = {});
ScaleEstimate estimate_scale(const sim::TimeSeries& series, const HurstEstimate& hurst, const ScaleOptions& options = {});

}  // namespace lrdcp::estimators
