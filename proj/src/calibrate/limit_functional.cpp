#include <algorithm>
#include <cmath>

#include "lrdcp/calibrate.hpp"
#include "lrdcp/error.hpp"

namespace lrdcp::calibrate {
namespace {

constexpr std::uint64_t kLimitTag = 0x6c696d6974ULL;

void check_order(int m, double hurst, std::size_t grid) {
  if (m != 1 && m != 2) throw DomainError("limit functional: unsupported Hermite order " + std::to_string(m) + " (expected 1 or 2)");
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("limit functional requires 0 < H < 1");
  if (m == 2 && !(hurst > 0.5)) throw DomainError("order-2 Hermite process requires 1/2 < H < 1");
  if (grid < 64) throw DomainError("limit functional requires grid >= 64");
}

// Latent length for the order-2 approximation.
std::size_t latent_length(std::size_t grid) { return std::max<std::size_t>(std::size_t{1} << 14, 16 * grid); }

struct PathBuilder {
  int m;
  double hurst;
  std::size_t grid;
  sim::GaussianModel model;
  std::size_t latent_n;
  double scale;

  PathBuilder(int m_, double h, std::size_t g) : m(m_), hurst(h), grid(g) {
    check_order(m, hurst, grid);
    if (m == 1) {
      model = sim::GaussianModel::fgn(hurst);
      latent_n = grid;
      scale = std::pow(static_cast<double>(grid), -hurst);
    } else {
      // D = 1 - H for the Hermite process; the latent fGn has 2 - 2 H_lat = D.
      model = sim::GaussianModel::fgn((1.0 + hurst) / 2.0);
      latent_n = latent_length(grid);
      const auto rho = sim::model_autocov_sequence(model, latent_n);
      scale = 1.0 / std::sqrt(subordinate::exact_dn_squared(rho, latent_n, 2));
    }
  }

  std::vector<double> path(Rng& rng) const {
    const auto x = sim::simulate_values(model, latent_n, rng);
    std::vector<double> z(grid + 1, 0.0);
    if (m == 1) {
      double s = 0.0;
      for (std::size_t i = 1; i <= grid; ++i) {
        s += x[i - 1];
        z[i] = s * scale;
      }
    } else {
      double s = 0.0;
      std::size_t j = 0;
      for (std::size_t i = 1; i <= grid; ++i) {
        const std::size_t upto = latent_n * i / grid;
        for (; j < upto; ++j) s += x[j] * x[j] - 1.0;
        z[i] = s * scale;
      }
    }
    const double end = z[grid];
    for (std::size_t i = 1; i < grid; ++i) z[i] -= static_cast<double>(i) / static_cast<double>(grid) * end;
    z[0] = 0.0;
    z[grid] = 0.0;
    return z;
  }
};

}  // namespace

std::vector<double> limit_bridge_path(int m, double hurst, std::size_t grid, Rng& rng) {
  return PathBuilder(m, hurst, grid).path(rng);
}

LimitFunctionalSample limit_functional(int m, double hurst, std::size_t grid, std::size_t reps,
                                       std::optional<Shift> shift, std::uint64_t seed) {
  const PathBuilder builder(m, hurst, grid);
  std::vector<double> drift(grid + 1, 0.0);
  if (shift) {
    for (std::size_t i = 0; i <= grid; ++i)
      drift[i] = shift->c * psi_tau(static_cast<double>(i) / static_cast<double>(grid), shift->tau);
  }
  LimitFunctionalSample out;
  out.m = m;
  out.hurst = hurst;
  out.grid_size = grid;
  out.values.resize(reps);
  parallel_for(reps, [&](std::size_t r) {
    Rng rng(derive_seed(seed, {kLimitTag, static_cast<std::uint64_t>(m), real_tag(hurst), grid, r}));
    const auto z = builder.path(rng);
    double sup = 0.0;
    for (std::size_t i = 0; i <= grid; ++i) sup = std::max(sup, std::abs(z[i] + drift[i]));
    out.values[r] = sup;
  });
  return out;
}

double limit_quantile(int m, double hurst, double alpha, std::size_t grid, std::size_t reps, std::uint64_t seed) {
  auto sample = limit_functional(m, hurst, grid, reps, std::nullopt, seed);
  std::sort(sample.values.begin(), sample.values.end());
  return empirical_quantile(sample.values, alpha);
}

double asymptotic_power(double c, double tau, double hurst, double alpha, std::size_t reps, std::uint64_t seed,
                        std::size_t grid) {
  if (c < 0.0) throw DomainError("asymptotic_power requires C >= 0");
  if (reps == 0) throw DomainError("asymptotic_power requires reps >= 1");
  const double q = limit_quantile(1, hurst, alpha, grid, reps, derive_seed(seed, {1}));
  const auto shifted = limit_functional(1, hurst, grid, reps, Shift{c, tau}, derive_seed(seed, {2}));
  std::size_t hits = 0;
  for (double v : shifted.values) hits += v > q ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(reps);
}

}  // namespace lrdcp::calibrate
