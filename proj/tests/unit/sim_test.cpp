#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "lrdcp/error.hpp"
#include "lrdcp/sim.hpp"

using namespace lrdcp;
using namespace lrdcp::sim;

namespace {

// Independent transcription of the fGn covariance.
double fgn_rho(double h, long k) {
  const double a = std::abs(static_cast<double>(k));
  return 0.5 * (std::pow(a + 1, 2 * h) - 2 * std::pow(a, 2 * h) + std::pow(std::abs(a - 1), 2 * h));
}

double farima_rho(double d, long k) {
  return std::exp(std::lgamma(k + d) + std::lgamma(1 - d) - std::lgamma(k - d + 1) - std::lgamma(d));
}

}  // namespace

TEST_CASE("fgn autocovariance matches the closed form") {
  for (double h : {0.55, 0.7, 0.95}) {
    for (long k : {0L, 1L, 2L, 17L, 500L}) CHECK(fgn_autocov(h, k) == doctest::Approx(fgn_rho(h, k)).epsilon(1e-12));
  }
  CHECK(fgn_autocov(0.5, 3) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("farima and ar1 autocorrelations") {
  const auto f = GaussianModel::farima00(0.2);
  for (long k : {1L, 5L, 40L}) CHECK(model_autocov(f, k) == doctest::Approx(farima_rho(0.2, k)).epsilon(1e-9));
  CHECK(model_autocov(f, 0) == doctest::Approx(1.0));
  const auto a = GaussianModel::ar1(0.6);
  for (long k : {0L, 1L, 4L}) CHECK(model_autocov(a, k) == doctest::Approx(std::pow(0.6, k)).epsilon(1e-12));
  const auto g = GaussianModel::farima10(0.2, 0.4);
  CHECK(model_autocov(g, 0) == doctest::Approx(1.0));
  CHECK(model_autocov(g, 1) > model_autocov(f, 1));
}

TEST_CASE("tail constants") {
  const auto [d_fgn, c_fgn] = GaussianModel::fgn(0.8).tail_constants();
  CHECK(d_fgn == doctest::Approx(0.4));
  CHECK(c_fgn == doctest::Approx(0.8 * 0.6));
  const auto [d_far, c_far] = GaussianModel::farima00(0.2).tail_constants();
  CHECK(d_far == doctest::Approx(0.6));
  CHECK(c_far == doctest::Approx(std::tgamma(0.8) / std::tgamma(0.2)).epsilon(1e-6));
  CHECK_THROWS_AS(GaussianModel::ar1(0.6).tail_constants(), DomainError);
  CHECK(GaussianModel::ar1(0.6).implied_hurst() == 0.5);
  CHECK_FALSE(GaussianModel::ar1(0.6).long_memory());
  CHECK(GaussianModel::farima10(0.2, 0.4).implied_hurst() == doctest::Approx(0.7));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(GaussianModel::fgn(1.0), DomainError);
  CHECK_THROWS_AS(GaussianModel::fgn(0.0), DomainError);
  CHECK_THROWS_AS(GaussianModel::farima00(0.5), DomainError);
  CHECK_THROWS_AS(GaussianModel::ar1(1.0), DomainError);
  CHECK_THROWS_AS(simulate(GaussianModel::fgn(0.7), 1, {1, 0}), DomainError);
  CHECK_THROWS_AS(parse_model_kind("arma"), DomainError);
}

TEST_CASE("circulant embedding eigenvalues are nonnegative for fgn") {
  for (double h : {0.6, 0.9, 0.99}) {
    const auto ev = circulant_eigenvalues(model_autocov_sequence(GaussianModel::fgn(h), 1024));
    CHECK(ev.size() == 2 * 1023);
    CHECK(*std::min_element(ev.begin(), ev.end()) > -1e-9);
  }
}

TEST_CASE("simulation is a pure function of model, n and seed") {
  const auto m = GaussianModel::fgn(0.75);
  const auto a = simulate(m, 300, {42, 3});
  const auto b = simulate(m, 300, {42, 3});
  const auto c = simulate(m, 300, {42, 4});
  CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  CHECK_FALSE(std::equal(a.values().begin(), a.values().end(), c.values().begin()));
  REQUIRE(a.provenance().has_value());
  CHECK(a.provenance()->seed.replicate_index == 3);
}

TEST_CASE("simulated series reproduce the model covariance") {
  // Ensemble estimates at lags 0, 1 and 10 against the exact covariance.
  for (const auto& m : {GaussianModel::fgn(0.8), GaussianModel::farima10(0.2, 0.4), GaussianModel::ar1(0.6)}) {
    const std::size_t reps = 4000, n = 64;
    double s0 = 0, s1 = 0, s10 = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto x = simulate(m, n, {7, r});
      s0 += x[20] * x[20];
      s1 += x[20] * x[21];
      s10 += x[20] * x[30];
    }
    const double se = 3.0 * std::sqrt(2.0 / reps);
    CHECK(std::abs(s0 / reps - 1.0) < se);
    CHECK(std::abs(s1 / reps - model_autocov(m, 1)) < se);
    CHECK(std::abs(s10 / reps - model_autocov(m, 10)) < se);
  }
}

TEST_CASE("variance of partial sums of fgn is n^{2H}") {
  for (double h : {0.6, 0.85}) {
    const std::size_t n = 200;
    const auto rho = model_autocov_sequence(GaussianModel::fgn(h), n);
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v += rho[i > j ? i - j : j - i];
    CHECK(v == doctest::Approx(std::pow(static_cast<double>(n), 2 * h)).epsilon(1e-10));
  }
}

TEST_CASE("TimeSeries rejects non-finite values") {
  CHECK_THROWS_AS(TimeSeries({1.0, NAN}), DomainError);
  CHECK_THROWS_AS(TimeSeries({1.0}), DomainError);
}
