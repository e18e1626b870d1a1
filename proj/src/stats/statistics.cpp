#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "lrdcp/error.hpp"
#include "lrdcp/stats.hpp"

namespace lrdcp::stats {
namespace {

void require_length(std::size_t n) {
  if (n < 2) throw DomainError("change-point statistics require n >= 2");
}

// Dense ranks 0..u-1 (ties share a rank) and the cumulative counts
// N[r] = #{i : rank_i <= r}.
struct Ranks {
  std::vector<std::uint32_t> rank;
  std::vector<std::int64_t> cumulative;
};

Ranks dense_ranks(std::span<const double> y) {
  const std::size_t n = y.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return y[a] < y[b]; });
  Ranks out;
  out.rank.resize(n);
  std::vector<std::int64_t> counts;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || y[order[i]] != y[order[i - 1]]) counts.push_back(0);
    out.rank[order[i]] = static_cast<std::uint32_t>(counts.size() - 1);
    ++counts.back();
  }
  out.cumulative.resize(counts.size());
  std::partial_sum(counts.begin(), counts.end(), out.cumulative.begin());
  return out;
}

// Scans profile values in k order; keeps the first maximizer.
struct ArgMax {
  double value = -1.0;
  std::size_t k = 1;
  void offer(std::size_t kk, double v) {
    if (v > value) {
      value = v;
      k = kk;
    }
  }
};

// Bridge f_k(x_u) = n S_k(u) - k N(u) kept in exact integers. Returns KS and
// CvM profiles through the callback (k, ks_k, cvm_k).
template <class Fn>
void empirical_bridge(std::span<const double> y, Fn&& on_k) {
  const std::size_t n = y.size();
  const auto ranks = dense_ranks(y);
  const std::size_t levels = ranks.cumulative.size();
  const auto nn = static_cast<std::int64_t>(n);
  std::vector<double> mult(levels);
  mult[0] = static_cast<double>(ranks.cumulative[0]);
  for (std::size_t u = 1; u < levels; ++u)
    mult[u] = static_cast<double>(ranks.cumulative[u] - ranks.cumulative[u - 1]);
  std::vector<std::int64_t> f(levels, 0);
  const double n_d = static_cast<double>(n);
  const double n3 = n_d * n_d * n_d;
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t r0 = ranks.rank[k - 1];
    std::int64_t maxabs = 0;
    double sumsq = 0.0;
    for (std::size_t u = 0; u < r0; ++u) {
      f[u] -= ranks.cumulative[u];
      const std::int64_t a = f[u] < 0 ? -f[u] : f[u];
      maxabs = std::max(maxabs, a);
      sumsq += mult[u] * static_cast<double>(f[u]) * static_cast<double>(f[u]);
    }
    for (std::size_t u = r0; u < levels; ++u) {
      f[u] += nn - ranks.cumulative[u];
      const std::int64_t a = f[u] < 0 ? -f[u] : f[u];
      maxabs = std::max(maxabs, a);
      sumsq += mult[u] * static_cast<double>(f[u]) * static_cast<double>(f[u]);
    }
    on_k(k, static_cast<double>(maxabs) / n_d, sumsq / n3);
  }
}

class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t i) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }
  // Number of inserted ranks < r.
  std::int64_t below(std::size_t r) const {
    std::int64_t s = 0;
    for (std::size_t i = r; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

 private:
  std::vector<std::int64_t> tree_;
};

// Calls on_k(k, |W_k|) with W_k = sum_{i<=k<j} (1{Y_i <= Y_j} - 1/2).
template <class Fn>
void wilcoxon_profile(std::span<const double> y, Fn&& on_k) {
  const std::size_t n = y.size();
  const auto ranks = dense_ranks(y);
  Fenwick left(ranks.cumulative.size());
  std::int64_t twice_w = 0;
  const auto nn = static_cast<std::int64_t>(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const std::size_t r = ranks.rank[k];
    const auto kk = static_cast<std::int64_t>(k);
    const std::int64_t left_below = left.below(r);
    const std::int64_t all_below = r == 0 ? 0 : ranks.cumulative[r - 1];
    // Pairs (i, m) with i on the left leave the sum; pairs (m, j) with j on the right enter.
    const std::int64_t a = left.below(r + 1);
    const std::int64_t b = (nn - all_below - 1) - (kk - left_below);
    twice_w -= 2 * a - kk;
    twice_w += 2 * b - (nn - kk - 1);
    left.add(r);
    on_k(k + 1, static_cast<double>(twice_w < 0 ? -twice_w : twice_w) / 2.0);
  }
}

template <class Fn>
void cusum_profile(std::span<const double> y, Fn&& on_k) {
  const std::size_t n = y.size();
  double total = 0.0;
  for (double v : y) total += v;
  double partial = 0.0;
  const double n_d = static_cast<double>(n);
  for (std::size_t k = 1; k < n; ++k) {
    partial += y[k - 1];
    on_k(k, std::abs(partial - static_cast<double>(k) / n_d * total));
  }
}

}  // namespace

std::string to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::Ks: return "ks";
    case StatisticKind::Cvm: return "cvm";
    case StatisticKind::Cusum: return "cusum";
    case StatisticKind::Wilcoxon: return "wilcoxon";
  }
  return "?";
}

StatisticKind parse_statistic(std::string_view name) {
  for (auto k : kAllStatistics)
    if (to_string(k) == name) return k;
  throw DomainError("unknown statistic '" + std::string(name) + "' (expected ks, cvm, cusum or wilcoxon)");
}

int normalization_power(StatisticKind kind) noexcept { return kind == StatisticKind::Cvm ? 2 : 1; }

bool rank_based(StatisticKind kind) noexcept { return kind != StatisticKind::Cusum; }

RawStatistics raw_statistic(StatisticKind kind, std::span<const double> y, bool keep_profile) {
  require_length(y.size());
  RawStatistics out;
  out.kind = kind;
  if (keep_profile) out.profile.assign(y.size(), 0.0);
  ArgMax best;
  auto record = [&](std::size_t k, double v) {
    best.offer(k, v);
    if (keep_profile) out.profile[k] = v;
  };
  switch (kind) {
    case StatisticKind::Ks:
      empirical_bridge(y, [&](std::size_t k, double ks, double) { record(k, ks); });
      break;
    case StatisticKind::Cvm:
      empirical_bridge(y, [&](std::size_t k, double, double cvm) { record(k, cvm); });
      break;
    case StatisticKind::Cusum: cusum_profile(y, record); break;
    case StatisticKind::Wilcoxon: wilcoxon_profile(y, record); break;
  }
  out.raw_value = best.value;
  out.argmax_k = best.k;
  return out;
}

RawStatistics ks_raw(const sim::TimeSeries& s, bool keep_profile) {
  return raw_statistic(StatisticKind::Ks, s.values(), keep_profile);
}
RawStatistics cvm_raw(const sim::TimeSeries& s, bool keep_profile) {
  return raw_statistic(StatisticKind::Cvm, s.values(), keep_profile);
}
RawStatistics cusum_raw(const sim::TimeSeries& s, bool keep_profile) {
  return raw_statistic(StatisticKind::Cusum, s.values(), keep_profile);
}
RawStatistics wilcoxon_raw(const sim::TimeSeries& s, bool keep_profile) {
  return raw_statistic(StatisticKind::Wilcoxon, s.values(), keep_profile);
}

std::array<double, 4> all_raw(std::span<const double> y) {
  require_length(y.size());
  std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
  empirical_bridge(y, [&](std::size_t, double ks, double cvm) {
    out[0] = std::max(out[0], ks);
    out[1] = std::max(out[1], cvm);
  });
  cusum_profile(y, [&](std::size_t, double v) { out[2] = std::max(out[2], v); });
  wilcoxon_profile(y, [&](std::size_t, double v) { out[3] = std::max(out[3], v); });
  return out;
}

std::size_t changepoint_estimate(std::span<const double> values, StatisticKind kind) {
  return raw_statistic(kind, values, false).argmax_k;
}

std::size_t changepoint_estimate(const sim::TimeSeries& series, StatisticKind kind) {
  return changepoint_estimate(series.values(), kind);
}

}  // namespace lrdcp::stats
