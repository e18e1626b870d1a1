#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "lrdcp/calibrate.hpp"
#include "lrdcp/error.hpp"
#include "lrdcp/estimators.hpp"
#include "lrdcp/sim.hpp"

using namespace lrdcp;
using namespace lrdcp::calibrate;
using stats::StatisticKind;

TEST_CASE("tent profile") {
  CHECK(psi_tau(0.25, 0.5) == doctest::Approx(0.125));
  CHECK(psi_tau(0.75, 0.5) == doctest::Approx(0.125));
  CHECK(psi_tau(0.2, 0.2) == doctest::Approx(0.16));
  CHECK(psi_tau(0.0, 0.3) == 0.0);
  CHECK(psi_tau(1.0, 0.3) == 0.0);
  CHECK_THROWS_AS(psi_tau(0.5, 1.0), DomainError);
}

TEST_CASE("empirical quantile picks order statistic ceil((1-alpha)J)") {
  std::vector<double> s(1000);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<double>(i + 1);
  CHECK(empirical_quantile(s, 0.05) == 950.0);
  CHECK(empirical_quantile(s, 0.01) == 990.0);
  CHECK(empirical_quantile(std::span(s).first(100), 0.05) == 95.0);
  CHECK(empirical_quantile(std::span(s).first(7), 0.1) == 7.0);
  CHECK_THROWS_AS(empirical_quantile(s, 0.0), DomainError);
}

TEST_CASE("critical value table semantics") {
  CriticalValueTable t(7);
  t.insert({StatisticKind::Cvm, 100, 0.6, 0.05, 1000, 10.0});
  t.insert({StatisticKind::Cvm, 100, 0.8, 0.05, 1000, 20.0});
  t.insert({StatisticKind::Cvm, 100, 0.8, 0.05, 1000, 30.0});  // replaces
  t.insert({StatisticKind::Cvm, 100, 0.8, 0.05, 300, 99.0});   // smaller J, kept separately
  CHECK(t.entries().size() == 3);
  CHECK(*t.lookup(StatisticKind::Cvm, 100, 0.8, 0.05) == 30.0);
  CHECK(*t.lookup(StatisticKind::Cvm, 100, 0.7, 0.05) == doctest::Approx(20.0));
  CHECK(*t.lookup(StatisticKind::Cvm, 100, 0.65, 0.05) == doctest::Approx(15.0));
  CHECK_FALSE(t.lookup(StatisticKind::Cvm, 100, 0.9, 0.05).has_value());
  CHECK_FALSE(t.lookup(StatisticKind::Ks, 100, 0.6, 0.05).has_value());
  CHECK_FALSE(t.lookup(StatisticKind::Cvm, 101, 0.6, 0.05).has_value());
}

TEST_CASE("table json round trip") {
  CriticalValueTable t(42);
  t.insert({StatisticKind::Wilcoxon, 250, 0.7, 0.01, 500, 1234.5});
  t.insert({StatisticKind::Ks, 100, 0.6, 0.05, 1000, 12.25});
  const auto text = t.to_json();
  const auto j = nlohmann::json::parse(text);
  CHECK(j["master_seed"] == 42);
  CHECK_FALSE(j.contains("created"));
  REQUIRE(j["entries"].size() == 2);
  CHECK(j["entries"][0]["stat"] == "ks");
  CHECK(j["entries"][0]["J"] == 1000);
  const auto back = CriticalValueTable::from_json(text);
  CHECK(back.to_json() == text);
  t.set_created("2026-01-01T00:00:00Z");
  CHECK(nlohmann::json::parse(t.to_json())["created"] == "2026-01-01T00:00:00Z");
  CHECK_THROWS_AS(CriticalValueTable::from_json("{\"entries\": [{\"stat\": \"ks\"}]}"), ParseError);
  CHECK_THROWS_AS(CriticalValueTable::from_json("not json"), ParseError);

  const auto path = std::filesystem::temp_directory_path() / "lrdcp_table_test.json";
  back.save(path);
  CHECK(CriticalValueTable::load(path).to_json() == text);
  std::filesystem::remove(path);
}

TEST_CASE("null sample matches statistics of independently seeded series") {
  const std::size_t n = 60, reps = 30;
  const auto s = null_raw_sample(n, 0.7, reps, 9);
  std::vector<double> cvm;
  for (std::size_t j = 0; j < reps; ++j) {
    Rng rng(derive_seed(9, {n, real_tag(0.7), j}));
    cvm.push_back(stats::raw_statistic(StatisticKind::Cvm, sim::simulate_values(sim::GaussianModel::fgn(0.7), n, rng))
                      .raw_value);
  }
  std::sort(cvm.begin(), cvm.end());
  CHECK(s[1] == cvm);
  for (const auto& col : s) CHECK(std::is_sorted(col.begin(), col.end()));
  CHECK_THROWS_AS(mc_critical_values(StatisticKind::Ks, n, 0.7, std::vector{0.05}, 99, 1), DomainError);
}

TEST_CASE("null distribution cache brackets the H grid") {
  using C = NullDistributionCache;
  CHECK(C::grid_hurst(20) == 0.7);
  CHECK(C::bracket(0.7) == std::pair<std::size_t, std::size_t>{20, 20});
  CHECK(C::bracket(0.705) == std::pair<std::size_t, std::size_t>{20, 21});
  CHECK(C::bracket(0.501) == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(C::bracket(0.3) == std::pair<std::size_t, std::size_t>{0, 0});
  CHECK(C::bracket(0.999) == std::pair<std::size_t, std::size_t>{49, 49});

  C cache(200, 5);
  const double a[] = {0.05};
  const double at = cache.critical(StatisticKind::Ks, 50, 0.7, 0.05);
  CHECK(at == mc_critical_values(StatisticKind::Ks, 50, 0.7, a, 200, 5).front().value);
  const double next = cache.critical(StatisticKind::Ks, 50, 0.71, 0.05);
  CHECK(cache.critical(StatisticKind::Ks, 50, 0.705, 0.05) == doctest::Approx(0.5 * (at + next)));
}

TEST_CASE("limit functional contracts") {
  Rng rng(3);
  for (int m : {1, 2}) {
    const auto path = limit_bridge_path(m, 0.8, 256, rng);
    REQUIRE(path.size() == 257);
    CHECK(path.front() == 0.0);
    CHECK(path.back() == 0.0);
  }
  CHECK_THROWS_AS(limit_bridge_path(3, 0.8, 256, rng), DomainError);
  CHECK_THROWS_AS(limit_bridge_path(1, 0.8, 32, rng), DomainError);
  CHECK_THROWS_AS(limit_bridge_path(2, 0.5, 256, rng), DomainError);
  const auto a = limit_functional(1, 0.7, 128, 50, std::nullopt, 4);
  const auto b = limit_functional(1, 0.7, 128, 50, std::nullopt, 4);
  CHECK(a.values == b.values);
  // a shift C psi_tau moves every path by at most C tau (1 - tau)
  const auto s = limit_functional(1, 0.7, 128, 50, Shift{2.0, 0.5}, 4);
  for (std::size_t r = 0; r < 50; ++r) CHECK(std::abs(s.values[r] - a.values[r]) <= 0.5 + 1e-12);
}

TEST_CASE("asymptotic power grows with the shift") {
  const double p0 = asymptotic_power(0.0, 0.5, 0.7, 0.05, 2000, 8, 256);
  const double p5 = asymptotic_power(5.0, 0.5, 0.7, 0.05, 2000, 8, 256);
  CHECK(std::abs(p0 - 0.05) < 0.02);
  CHECK(p5 > p0 + 0.3);
}

TEST_CASE("asymptotic constants are Gaussian integrals of J_1") {
  const auto phi = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi); };
  double cube = 0, square = 0;
  const double h = 1e-3;
  for (double x = -10; x <= 10; x += h) cube += phi(x) * phi(x) * phi(x) * h, square += phi(x) * phi(x) * h;
  CHECK(asymptotic_constant(StatisticKind::Ks) == doctest::Approx(phi(0)));
  CHECK(asymptotic_constant(StatisticKind::Cvm) == doctest::Approx(cube).epsilon(1e-9));
  CHECK(asymptotic_constant(StatisticKind::Wilcoxon) == doctest::Approx(square).epsilon(1e-9));
  CHECK(asymptotic_constant(StatisticKind::Cusum) == 1.0);
}

TEST_CASE("known-H decision is raw statistic against the raw critical value") {
  const auto y = sim::simulate(sim::GaussianModel::fgn(0.7), 120, {1, 0}).release();
  CriticalValueTable t;
  for (auto kind : stats::kAllStatistics) {
    const double raw = stats::raw_statistic(kind, y).raw_value;
    for (double q : {0.5 * raw, 2.0 * raw}) {
      t.insert({kind, 120, 0.7, 0.05, 1000, q});
      TestOptions o;
      o.kind = kind;
      o.hurst = 0.7;
      o.table = &t;
      const auto r = perform_test(y, o);
      CHECK(r.reject == (raw > q));
      const double d = std::pow(120.0, 0.7);
      const double p = kind == StatisticKind::Cvm ? 2.0 : 1.0;
      const double extra = kind == StatisticKind::Wilcoxon ? 120.0 : 1.0;
      CHECK(r.normalized_value == doctest::Approx(raw / (std::pow(d, p) * extra)).epsilon(1e-12));
      CHECK(r.critical_value == doctest::Approx(q / (std::pow(d, p) * extra)).epsilon(1e-12));
      CHECK(r.k_hat == stats::changepoint_estimate(y, kind));
    }
  }
}

TEST_CASE("monte carlo decisions of rank tests are invariant under increasing maps") {
  NullDistributionCache cache(200, 3);
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto y = sim::simulate(sim::GaussianModel::fgn(0.75), 80, {s, 0}).release();
    for (std::size_t i = 40; i < y.size(); ++i) y[i] += 0.6;
    auto e = y;
    for (auto& v : e) v = std::exp(v);
    for (auto kind : {StatisticKind::Ks, StatisticKind::Cvm, StatisticKind::Wilcoxon}) {
      TestOptions o;
      o.kind = kind;
      o.hurst = 0.75;
      o.cache = &cache;
      CHECK(perform_test(y, o).reject == perform_test(e, o).reject);
    }
  }
}

TEST_CASE("estimated H and asymptotic calibration") {
  const auto y = sim::simulate(sim::GaussianModel::fgn(0.7), 200, {2, 0}).release();
  NullDistributionCache cache(200, 1);
  TestOptions o;
  o.kind = StatisticKind::Cusum;
  o.hurst_source = HurstSource::Whittle;
  o.cache = &cache;
  const auto r = perform_test(y, o);
  CHECK(r.hurst_used == estimators::local_whittle(y).value);
  CHECK(r.normalization.value == doctest::Approx(std::pow(200.0, r.hurst_used)));

  o.scale_correction = true;
  const auto rs = perform_test(y, o);
  CHECK(rs.normalization.source == subordinate::NormalizationSource::Estimated);

  TestOptions a;
  a.kind = StatisticKind::Cvm;
  a.hurst = 0.7;
  a.calibration = CalibrationMode::Asymptotic;
  a.limit_grid = 128;
  a.limit_reps = 300;
  const auto ra = perform_test(y, a);
  const double q = limit_quantile(1, 0.7, 0.05, 128, 300, a.seed);
  CHECK(ra.critical_value == doctest::Approx(asymptotic_constant(StatisticKind::Cvm) * q * q));

  TestOptions bad;
  bad.hurst = 0.5;
  CHECK_THROWS_AS(perform_test(y, bad), DomainError);
  bad.hurst.reset();
  CHECK_THROWS_AS(perform_test(y, bad), DomainError);
}

TEST_CASE("report json keeps its field order") {
  const auto y = sim::simulate(sim::GaussianModel::fgn(0.7), 100, {2, 0}).release();
  CriticalValueTable t;
  t.insert({StatisticKind::Ks, 100, 0.7, 0.05, 1000, 5.0});
  TestOptions o;
  o.kind = StatisticKind::Ks;
  o.hurst = 0.7;
  o.table = &t;
  const auto j = nlohmann::ordered_json::parse(report_to_json(perform_test(y, o)));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"kind", "raw_value", "normalization", "normalized_value", "critical_value",
                                         "alpha", "reject", "k_hat", "hurst_used"});
  CHECK(j["normalization"]["source"] == "exact_double_sum");
}
