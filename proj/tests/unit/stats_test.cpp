#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "lrdcp/error.hpp"
#include "lrdcp/stats.hpp"

using namespace lrdcp;
using namespace lrdcp::stats;

namespace {

struct Brute {
  double ks = 0, cvm = 0, cusum = 0, wilcoxon = 0;
  std::array<std::size_t, 4> arg{1, 1, 1, 1};
};

// Direct enumeration of the four profiles. The empirical bridges are kept as
// integers scaled by n so that ties between split points compare exactly.
Brute brute(const std::vector<double>& y) {
  const long long n = static_cast<long long>(y.size());
  Brute b;
  double total = 0;
  for (double v : y) total += v;
  long long best_ks = 0, best_cvm = 0, best_w = 0;
  for (long long k = 1; k < n; ++k) {
    long long ks = 0, cvm = 0;
    for (double x : y) {
      long long left = 0, all = 0;
      for (long long i = 0; i < n; ++i) {
        all += y[i] <= x;
        if (i < k) left += y[i] <= x;
      }
      const long long d = n * left - k * all;
      ks = std::max(ks, std::abs(d));
      cvm += d * d;
    }
    double partial = 0;
    for (long long i = 0; i < k; ++i) partial += y[i];
    const double cusum = std::abs(partial - static_cast<double>(k) / n * total);
    long long w = 0;
    for (long long i = 0; i < k; ++i)
      for (long long j = k; j < n; ++j) w += y[i] <= y[j] ? 1 : -1;
    w = std::abs(w);
    if (ks > best_ks) best_ks = ks, b.arg[0] = k;
    if (cvm > best_cvm) best_cvm = cvm, b.arg[1] = k;
    if (cusum > b.cusum) b.cusum = cusum, b.arg[2] = k;
    if (w > best_w) best_w = w, b.arg[3] = k;
  }
  b.ks = static_cast<double>(best_ks) / n;
  b.cvm = static_cast<double>(best_cvm) / static_cast<double>(n * n * n);
  b.wilcoxon = static_cast<double>(best_w) / 2;
  return b;
}

std::vector<double> random_series(std::mt19937_64& rng, std::size_t n, bool ties) {
  std::normal_distribution<double> z;
  std::uniform_int_distribution<int> small(0, 3);
  std::vector<double> y(n);
  for (auto& v : y) v = ties ? small(rng) : z(rng);
  return y;
}

}  // namespace

TEST_CASE("names round trip") {
  for (auto k : kAllStatistics) CHECK(parse_statistic(to_string(k)) == k);
  CHECK_THROWS_AS(parse_statistic("ad"), DomainError);
  CHECK(normalization_power(StatisticKind::Cvm) == 2);
  CHECK(normalization_power(StatisticKind::Ks) == 1);
  CHECK(rank_based(StatisticKind::Wilcoxon));
  CHECK_FALSE(rank_based(StatisticKind::Cusum));
}

TEST_CASE("incremental statistics equal direct enumeration") {
  std::mt19937_64 rng(2024);
  for (int r = 0; r < 300; ++r) {
    const std::size_t n = 2 + r % 14;
    const auto y = random_series(rng, n, r % 3 == 0);
    const auto b = brute(y);
    const auto ks = raw_statistic(StatisticKind::Ks, y);
    const auto cvm = raw_statistic(StatisticKind::Cvm, y);
    const auto cu = raw_statistic(StatisticKind::Cusum, y);
    const auto w = raw_statistic(StatisticKind::Wilcoxon, y);
    CHECK(ks.raw_value == doctest::Approx(b.ks).epsilon(1e-12));
    CHECK(cvm.raw_value == doctest::Approx(b.cvm).epsilon(1e-12));
    CHECK(cu.raw_value == doctest::Approx(b.cusum).epsilon(1e-12));
    CHECK(w.raw_value == doctest::Approx(b.wilcoxon).epsilon(1e-12));
    if (r % 3 != 0) {
      CHECK(ks.argmax_k == b.arg[0]);
      CHECK(cvm.argmax_k == b.arg[1]);
      CHECK(w.argmax_k == b.arg[3]);
    }
    const auto all = all_raw(y);
    CHECK(all[0] == ks.raw_value);
    CHECK(all[1] == cvm.raw_value);
    CHECK(all[2] == cu.raw_value);
    CHECK(all[3] == w.raw_value);
  }
}

TEST_CASE("profiles are indexed by k") {
  const std::vector<double> y{0.3, -1.2, 2.0, 0.7, -0.1, 1.5};
  for (auto kind : kAllStatistics) {
    const auto r = raw_statistic(kind, y, true);
    REQUIRE(r.profile.size() == y.size());
    CHECK(r.profile[0] == 0.0);
    CHECK(r.profile[r.argmax_k] == r.raw_value);
    CHECK(*std::max_element(r.profile.begin(), r.profile.end()) == r.raw_value);
    CHECK(changepoint_estimate(y, kind) == r.argmax_k);
  }
  CHECK(raw_statistic(StatisticKind::Ks, y).profile.empty());
}

TEST_CASE("constant series") {
  const std::vector<double> y(9, 1.5);
  CHECK(raw_statistic(StatisticKind::Ks, y).raw_value == 0.0);
  CHECK(raw_statistic(StatisticKind::Cvm, y).raw_value == 0.0);
  CHECK(raw_statistic(StatisticKind::Cusum, y).raw_value == doctest::Approx(0.0));
  // every tied pair contributes 1 - 1/2, so the profile is k(n-k)/2 with its first maximum at n/2
  const auto w = raw_statistic(StatisticKind::Wilcoxon, y, true);
  for (std::size_t k = 1; k < y.size(); ++k) CHECK(w.profile[k] == doctest::Approx(k * (9.0 - k) / 2));
  CHECK(w.argmax_k == 4);
}

TEST_CASE("rank statistics are invariant under increasing maps, cusum is not") {
  std::mt19937_64 rng(5);
  int cusum_changed = 0;
  for (int r = 0; r < 100; ++r) {
    auto y = random_series(rng, 80, false);
    std::vector<double> e(y.size());
    std::transform(y.begin(), y.end(), e.begin(), [](double v) { return std::exp(v); });
    for (auto kind : {StatisticKind::Ks, StatisticKind::Cvm, StatisticKind::Wilcoxon})
      CHECK(raw_statistic(kind, y).raw_value == raw_statistic(kind, e).raw_value);
    cusum_changed += raw_statistic(StatisticKind::Cusum, y).raw_value != raw_statistic(StatisticKind::Cusum, e).raw_value;
  }
  CHECK(cusum_changed >= 99);
}

TEST_CASE("statistics are nonnegative and symmetric under reversal") {
  std::mt19937_64 rng(9);
  for (int r = 0; r < 50; ++r) {
    auto y = random_series(rng, 40, false);
    auto rev = y;
    std::reverse(rev.begin(), rev.end());
    for (auto kind : kAllStatistics) {
      const double a = raw_statistic(kind, y).raw_value;
      CHECK(a >= 0.0);
      CHECK(raw_statistic(kind, rev).raw_value == doctest::Approx(a).epsilon(1e-12));
    }
  }
}

TEST_CASE("a mean shift is located") {
  std::vector<double> y(60, 0.0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z(0, 0.1);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = z(rng) + (i >= 25 ? 3.0 : 0.0);
  for (auto kind : kAllStatistics) CHECK(changepoint_estimate(y, kind) == 25);
}

TEST_CASE("too short input") {
  CHECK_THROWS_AS(raw_statistic(StatisticKind::Ks, std::vector<double>{1.0}), DomainError);
}
