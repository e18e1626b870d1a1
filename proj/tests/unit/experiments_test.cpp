#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "lrdcp/error.hpp"
#include "lrdcp/experiments.hpp"
#include "lrdcp/sim.hpp"

using namespace lrdcp;
using namespace lrdcp::experiments;
using subordinate::normal_cdf;
using subordinate::normal_pdf;

namespace {

LocalAlternative alternative(AlternativeKind kind, double c1, double c2 = 0.0) {
  LocalAlternative a;
  a.kind = kind;
  a.c1 = c1;
  a.c2 = c2;
  return a;
}

}  // namespace

TEST_CASE("change injection splits at floor(n tau)") {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0};
  const auto y = apply_change(x, mean_shift_change(10.0, 0.5));
  CHECK(y == std::vector<double>{0.0, 1.0, 12.0, 13.0, 14.0});
  CHECK(apply_change(x, no_change()) == x);
  CHECK(variance_change(2.0, 0.4).break_index(10) == 4);
  CHECK(apply_change(x, variance_change(2.0, 0.4))[4] == 8.0);
  CHECK(apply_change(x, mean_variance_change(2.0, 1.0, 0.2))[1] == 3.0);
  CHECK(apply_change(x, chi_square_change(0.5, 1.0, 0.2))[0] == 0.0);
  CHECK(apply_change(x, chi_square_change(0.5, 1.0, 0.2))[2] == doctest::Approx(4.0 + 1.0 + 1.0));
  CHECK_THROWS_AS(mean_shift_change(1.0, 0.0).break_index(10), DomainError);
}

TEST_CASE("with equal regimes the output does not depend on tau") {
  const auto m = sim::GaussianModel::fgn(0.7);
  ChangeSpec a{Subordinator::square(), Subordinator::square(), 0.3};
  ChangeSpec b{Subordinator::square(), Subordinator::square(), 0.7};
  const auto ya = inject_change(m, a, 200, {5, 1});
  const auto yb = inject_change(m, b, 200, {5, 1});
  CHECK(std::equal(ya.values().begin(), ya.values().end(), yb.values().begin()));
  REQUIRE(ya.provenance().has_value());
}

TEST_CASE("the multiple Hermite preset has normal marginals on both sides") {
  const auto p = multiple_hermite_preset(0.5, 1.0, 0.5);
  for (double x : {-1.5, 0.0, 0.8}) {
    CHECK(p.pre.marginal_cdf(x) == doctest::Approx(normal_cdf(x)).epsilon(1e-7));
    CHECK(p.post.marginal_cdf(x) == doctest::Approx(normal_cdf(x - 1.0)).epsilon(1e-7));
  }
  CHECK(p.pre(-0.7) == doctest::Approx(p.pre(0.7)));
  CHECK_THROWS_AS(multiple_hermite_preset(0.0, 1.0, 0.5), DomainError);
}

TEST_CASE("local alternative drifts") {
  const auto ms = alternative(AlternativeKind::MeanShift, 2.0);
  CHECK(local_alternative_g(ms, 0.3) == doctest::Approx(2.0 * normal_pdf(0.3)));
  const auto vc = alternative(AlternativeKind::VarianceChange, 2.0);
  CHECK(local_alternative_g(vc, 0.3) == doctest::Approx(2.0 * 0.3 * normal_pdf(0.3)));
  const auto mv = alternative(AlternativeKind::MeanVariance, 1.0, 0.5);
  CHECK(local_alternative_g(mv, 0.3) == doctest::Approx(normal_pdf(0.3) * (1.0 + 0.5 * 0.3)));
  const auto cs = alternative(AlternativeKind::ChiSquareScale, 1.5);
  CHECK(local_alternative_g(cs, -1.0) == 0.0);
  CHECK(local_alternative_g(cs, 4.0) == doctest::Approx(1.5 * 2.0 * normal_pdf(2.0)));
  CHECK_FALSE(ms.rate_description().empty());
}

TEST_CASE("finite-n mean shift drift converges to g") {
  const std::size_t n = 100000;
  const double d = subordinate::normalization_dn(n, 1, sim::GaussianModel::fgn(0.7),
                                                 subordinate::NormalizationSource::AsymptoticFormula)
                       .value;
  const double mu = d / n;
  const auto ms = alternative(AlternativeKind::MeanShift, 1.0);
  for (double x = -4.0; x <= 4.0; x += 0.1) {
    const double drift = (n / d) * (normal_cdf(x) - normal_cdf(x - mu));
    CHECK(std::abs(drift - local_alternative_g(ms, x)) < 0.01);
  }
}

TEST_CASE("power config parsing") {
  const auto c = parse_power_config(
      "# study\n"
      "scenario = variance\n"
      "stat=cvm,ks\n"
      "hurst_mode=known,split\n"
      "n=50,100\n"
      "H=0.6,0.8\n"
      "\n"
      "sigma2=1.25\n"
      "reps=200\n"
      "J=300\n"
      "seed=7\n");
  CHECK(c.scenario == "variance");
  CHECK(c.statistics.size() == 2);
  CHECK(c.hurst_modes.size() == 2);
  CHECK(c.ns == std::vector<std::size_t>{50, 100});
  CHECK(c.sigma == doctest::Approx(std::sqrt(1.25)));
  CHECK(c.calib_reps == 300);
  CHECK(c.seed == 7);
  auto lines = describe_config(c);
  std::replace(lines.begin(), lines.end(), ' ', '\n');
  const auto again = parse_power_config(lines);
  CHECK(describe_config(again) == describe_config(c));

  const auto line_of = [](const std::string& text) {
    try {
      parse_power_config(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("n=100\nbogus=1\n") == 2);
  CHECK(line_of("n=100\nreps=1.5\n") == 2);
  CHECK(line_of("# c\n\nstat=ad\n") == 3);
  CHECK(line_of("n=100\nnovalue\n") == 2);
  CHECK(line_of("scenario=weird\n") == 1);
}

TEST_CASE("scenario wiring") {
  PowerConfig c;
  c.scenario = "null";
  CHECK(scenario_change(c).tau == 1.0);
  c.model = "farima10";
  CHECK(scenario_models(c).size() == 1);
  c.model = "fgn";
  c.hursts = {0.6, 0.7};
  CHECK(scenario_models(c).size() == 2);
}

TEST_CASE("power study is deterministic and csv is well formed") {
  PowerConfig c;
  c.statistics = {stats::StatisticKind::Cvm, stats::StatisticKind::Cusum};
  c.ns = {60};
  c.hursts = {0.7};
  c.reps = 100;
  c.calib_reps = 100;
  c.seed = 3;
  const auto a = run_power_study(c);
  const auto b = run_power_study(c);
  REQUIRE(a.rows.size() == 2);
  const auto csv = power_table_csv(a);
  CHECK(csv == power_table_csv(b));
  CHECK(csv.rfind("scenario,stat,hurst_mode,n,H,rate,reps\n", 0) == 0);
  for (const auto& r : a.rows) {
    CHECK(r.rate >= 0.0);
    CHECK(r.rate <= 1.0);
    CHECK(r.reps + r.failed == 100);
  }
  c.reps = 50;
  CHECK_THROWS_AS(run_power_study(c), DomainError);
}

TEST_CASE("power increases with the size of the shift") {
  for (double h : {0.6, 0.8}) {
    PowerConfig c;
    c.statistics = {stats::StatisticKind::Cvm};
    c.ns = {100};
    c.hursts = {h};
    c.reps = 400;
    c.calib_reps = 400;
    c.mu = 0.5;
    const double low = run_power_study(c).rows.front().rate;
    c.mu = 1.0;
    const double high = run_power_study(c).rows.front().rate;
    const double se = std::sqrt((low * (1 - low) + high * (1 - high)) / 400);
    CHECK(high - low > 2 * se);
  }
}

TEST_CASE("relative efficiency helpers") {
  CHECK(gaussian_ratio_r() == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  const double q = 1.3;
  CHECK(fstar(0.7, 0.0, q, 0.5, 0.1, 0.9) == 0.7);
  CHECK(fstar(0.7, 0.4, q, 0.5, 0.1, 0.9) > 0.7);
  const double coarse = fstar(1.0, 1.0, q, 0.5, 0.1, 0.9, 1e-4);
  const double fine = fstar(1.0, 1.0, q, 0.5, 0.1, 0.9, 5e-5);
  CHECK(std::abs(coarse - fine) < 1e-6);
  CHECK(are_mean_variance(1.0, 1.0, q, 0.5, 0.1, 0.9, 0.7) > 1.0);
  CHECK(std::abs(are_mean_variance(1.0, 1e-6, q, 0.5, 0.1, 0.9, 0.7) - 1.0) < 1e-3);
  CHECK_THROWS_AS(fstar(1.0, 1.0, q, 0.5, 0.6, 0.4), DomainError);
}

TEST_CASE("mean shift check repeats the common limit power") {
  const auto m = are_mean_shift_check(0.7, 0.5, 1.0, 0.05, 200, 3, 100);
  for (double p : m.limit_power) CHECK(p == m.limit_power[0]);
  CHECK(m.mu == doctest::Approx(1.0 * std::pow(100.0, 0.7 - 1.0)));
}

TEST_CASE("verify suite names") {
  const auto names = verify_suites();
  CHECK(names.back() == "all");
  CHECK_THROWS_AS(run_verify("nope", {}), DomainError);
  const auto r = run_verify("are", {});
  for (const auto& c : r) CHECK(c.passed);
}
