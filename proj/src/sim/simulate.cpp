#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <variant>

#include "../core/fft.hpp"
#include "lrdcp/error.hpp"
#include "lrdcp/sim.hpp"

namespace lrdcp::sim {

double farima10_variance(double d, double a1);

namespace {

constexpr std::size_t kCholeskyLimit = 2048;
constexpr std::size_t kCacheLimit = 64;

struct CirculantFactor {
  std::vector<double> scale;  // sqrt(lambda_j / M)
};
struct CholeskyFactor {
  Eigen::MatrixXd lower;
};
using Factor = std::variant<CirculantFactor, CholeskyFactor>;

using CacheKey = std::tuple<int, double, double, double, std::size_t>;

std::mutex g_cache_mutex;
std::map<CacheKey, std::shared_ptr<const Factor>> g_cache;

std::shared_ptr<const Factor> build_factor(const GaussianModel& model, std::size_t n) {
  const auto rho = model_autocov_sequence(model, n);
  const auto lambda = circulant_eigenvalues(rho);
  const double lmax = *std::max_element(lambda.begin(), lambda.end());
  const double lmin = *std::min_element(lambda.begin(), lambda.end());
  const double tol = 1e-10 * std::max(1.0, lmax);
  if (lmin >= -tol) {
    CirculantFactor f;
    const double m = static_cast<double>(lambda.size());
    f.scale.resize(lambda.size());
    for (std::size_t j = 0; j < lambda.size(); ++j) f.scale[j] = std::sqrt(std::max(0.0, lambda[j]) / m);
    return std::make_shared<const Factor>(std::move(f));
  }
  if (n > kCholeskyLimit) {
    throw NumericError("circulant embedding failed for " + model.describe() + " at n=" + std::to_string(n) +
                       " (min eigenvalue " + std::to_string(lmin) + ") and n exceeds the Cholesky fallback limit");
  }
  Eigen::MatrixXd cov(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cov(i, j) = rho[i > j ? i - j : j - i];
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw NumericError("covariance matrix is not positive definite");
  return std::make_shared<const Factor>(CholeskyFactor{llt.matrixL()});
}

std::shared_ptr<const Factor> factor_for(const GaussianModel& model, std::size_t n) {
  const CacheKey key{static_cast<int>(model.kind), model.hurst, model.d, model.a1, n};
  {
    std::lock_guard lock(g_cache_mutex);
    auto it = g_cache.find(key);
    if (it != g_cache.end()) return it->second;
  }
  auto f = build_factor(model, n);
  std::lock_guard lock(g_cache_mutex);
  if (g_cache.size() >= kCacheLimit) g_cache.clear();
  g_cache.emplace(key, f);
  return f;
}

// Stationary zero-mean unit-variance Gaussian with the exact autocovariance of
// `model` (Fgn or Farima00).
std::vector<double> sample_exact(const GaussianModel& model, std::size_t n, Rng& rng) {
  const auto factor = factor_for(model, n);
  std::normal_distribution<double> normal;
  std::vector<double> out(n);
  if (const auto* circ = std::get_if<CirculantFactor>(factor.get())) {
    const std::size_t m = circ->scale.size();
    std::vector<std::complex<double>> w(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      w[j] = {circ->scale[j] * re, circ->scale[j] * im};
    }
    detail::dft_forward(w);
    for (std::size_t k = 0; k < n; ++k) out[k] = w[k].real();
  } else {
    const auto& lower = std::get<CholeskyFactor>(*factor).lower;
    Eigen::VectorXd z(n);
    for (std::size_t i = 0; i < n; ++i) z[static_cast<Eigen::Index>(i)] = normal(rng);
    const Eigen::VectorXd x = lower * z;
    for (std::size_t i = 0; i < n; ++i) out[i] = x[static_cast<Eigen::Index>(i)];
  }
  return out;
}

}  // namespace

TimeSeries::TimeSeries(std::vector<double> values, std::optional<Provenance> provenance)
    : values_(std::move(values)), provenance_(std::move(provenance)) {
  if (values_.size() < 2) throw DomainError("a time series needs at least 2 values");
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("time series values must be finite");
}

std::vector<double> circulant_eigenvalues(std::span<const double> autocov) {
  const std::size_t n = autocov.size();
  if (n < 2) throw DomainError("circulant embedding needs at least 2 lags");
  const std::size_t m = 2 * (n - 1);
  std::vector<std::complex<double>> c(m);
  for (std::size_t j = 0; j < n; ++j) c[j] = autocov[j];
  for (std::size_t j = 1; j + 1 < n; ++j) c[m - j] = autocov[j];
  detail::dft_forward(c);
  std::vector<double> lambda(m);
  for (std::size_t j = 0; j < m; ++j) lambda[j] = c[j].real();
  return lambda;
}

std::vector<double> simulate_values(const GaussianModel& model, std::size_t n, Rng& rng) {
  model.validate();
  if (n < 2) throw DomainError("simulate requires n >= 2");
  switch (model.kind) {
    case ModelKind::Fgn:
    case ModelKind::Farima00:
      return sample_exact(model, n, rng);
    case ModelKind::Farima10: {
      const std::size_t burn = ar_burn_in(model.a1);
      const auto u = sample_exact(GaussianModel::farima00(model.d), n + burn, rng);
      const double sd = std::sqrt(farima10_variance(model.d, model.a1));
      std::vector<double> out(n);
      double x = 0.0;
      for (std::size_t t = 0; t < n + burn; ++t) {
        x = model.a1 * x + u[t];
        if (t >= burn) out[t - burn] = x / sd;
      }
      return out;
    }
    case ModelKind::Ar1: {
      const std::size_t burn = ar_burn_in(model.a1);
      std::normal_distribution<double> normal(0.0, std::sqrt(1.0 - model.a1 * model.a1));
      std::vector<double> out(n);
      double x = 0.0;
      for (std::size_t t = 0; t < n + burn; ++t) {
        x = model.a1 * x + normal(rng);
        if (t >= burn) out[t - burn] = x;
      }
      return out;
    }
  }
  return {};
}

TimeSeries simulate(const GaussianModel& model, std::size_t n, const SeedSpec& seed) {
  Rng rng = make_rng(seed);
  return TimeSeries(simulate_values(model, n, rng), Provenance{model, seed});
}

}  // namespace lrdcp::sim
