#include <algorithm>
#include <cmath>

#include "lrdcp/error.hpp"
#include "lrdcp/subordinate.hpp"

namespace lrdcp::subordinate {

std::vector<std::vector<double>> coefficient_table(const Subordinator& g, std::span<const double> grid, int order) {
  std::vector<std::vector<double>> table(grid.size(), std::vector<double>(static_cast<std::size_t>(order) + 1));
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (int q = 0; q <= order; ++q) table[i][static_cast<std::size_t>(q)] = hermite_coeff(g, q, grid[i]).value;
  return table;
}

double reduction_sup(std::span<const double> latent, const Subordinator& g, std::span<const double> grid,
                     const std::vector<std::vector<double>>& coeffs, int order) {
  if (order < 0) throw DomainError("reduction_sup requires order >= 0");
  const std::size_t levels = grid.size();
  // weights[i][q] = J_q(x_i) / q!
  std::vector<std::vector<double>> weights(levels, std::vector<double>(static_cast<std::size_t>(order) + 1));
  for (std::size_t i = 0; i < levels; ++i)
    for (int q = 0; q <= order; ++q)
      weights[i][static_cast<std::size_t>(q)] = coeffs[i][static_cast<std::size_t>(q)] / factorial(q);

  std::vector<double> partial(levels, 0.0);
  double sup = 0.0;
  for (double xj : latent) {
    const double y = g(xj);
    const auto h = hermite_poly_all(order, xj);
    for (std::size_t i = 0; i < levels; ++i) {
      double expansion = 0.0;
      for (int q = 0; q <= order; ++q) expansion += weights[i][static_cast<std::size_t>(q)] * h[static_cast<std::size_t>(q)];
      partial[i] += (y <= grid[i] ? 1.0 : 0.0) - expansion;
      sup = std::max(sup, std::abs(partial[i]));
    }
  }
  return sup;
}

double reduction_residual(const sim::GaussianModel& model, const Subordinator& g, int m, std::size_t n,
                          std::size_t reps, std::uint64_t seed) {
  if (reps == 0) throw DomainError("reduction_residual requires reps >= 1");
  const auto info = hermite_rank(g, std::max(m, 1));
  if (info.rank > m) throw DomainError("reduction_residual requires hermite_rank(G) <= m");
  const auto d = normalization_dn(n, m, model, default_source(n));
  const auto grid = quantile_grid(g, 101);
  const auto coeffs = coefficient_table(g, grid, m);
  std::vector<double> sups(reps);
  parallel_for(reps, [&](std::size_t r) {
    Rng rng(derive_seed(seed, {0x7265647563ULL, n, r}));
    const auto x = sim::simulate_values(model, n, rng);
    sups[r] = reduction_sup(x, g, grid, coeffs, m) / d.value;
  });
  double total = 0.0;
  for (double s : sups) total += s;
  return total / static_cast<double>(reps);
}

}  // namespace lrdcp::subordinate
