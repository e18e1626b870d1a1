#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lrdcp/sim.hpp"
#include "lrdcp/subordinate.hpp"

namespace lrdcp::stats {

enum class StatisticKind { Ks, Cvm, Cusum, Wilcoxon };

inline constexpr std::array<StatisticKind, 4> kAllStatistics{StatisticKind::Ks, StatisticKind::Cvm,
                                                             StatisticKind::Cusum, StatisticKind::Wilcoxon};

/// "ks", "cvm", "cusum", "wilcoxon".
std::string to_string(StatisticKind kind);
StatisticKind parse_statistic(std::string_view name);

/// Power p of the normalization: the normalized statistic is raw / d^p
/// (p = 2 for CvM, 1 otherwise; Wilcoxon additionally divides by n).
int normalization_power(StatisticKind kind) noexcept;

/// Whether the statistic depends on the data only through ranks.
bool rank_based(StatisticKind kind) noexcept;

/// Unnormalized statistic. profile[k] is the per-split value for k = 0..n-1
/// (profile[0] = 0), so raw_value == profile[argmax_k]; the profile is only
/// filled when requested.
struct RawStatistics {
  StatisticKind kind = StatisticKind::Ks;
  double raw_value = 0.0;
  std::size_t argmax_k = 1;
  std::vector<double> profile;
};

RawStatistics ks_raw(const sim::TimeSeries& series, bool keep_profile = false);
RawStatistics cvm_raw(const sim::TimeSeries& series, bool keep_profile = false);
RawStatistics cusum_raw(const sim::TimeSeries& series, bool keep_profile = false);
RawStatistics wilcoxon_raw(const sim::TimeSeries& series, bool keep_profile = false);

RawStatistics raw_statistic(StatisticKind kind, std::span<const double> values, bool keep_profile = false);

/// All four raw values in kAllStatistics order; KS and CvM share one pass.
std::array<double, 4> all_raw(std::span<const double> values);

/// Smallest k in [1, n-1] maximizing the statistic's profile.
std::size_t changepoint_estimate(const sim::TimeSeries& series, StatisticKind kind);
std::size_t changepoint_estimate(std::span<const double> values, StatisticKind kind);

struct TestReport {
  StatisticKind kind = StatisticKind::Ks;
  double raw_value = 0.0;
  subordinate::Normalization normalization;
  double normalized_value = 0.0;
  double critical_value = 0.0;
  double alpha = 0.05;
  bool reject = false;
  std::size_t k_hat = 1;
  double hurst_used = 0.5;
};

}  // namespace lrdcp::stats
