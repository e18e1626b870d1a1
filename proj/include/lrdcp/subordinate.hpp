#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lrdcp/rng.hpp"
#include "lrdcp/sim.hpp"

namespace lrdcp::subordinate {

// ---------------------------------------------------------------------------
// Standard normal helpers.

double normal_pdf(double x) noexcept;
double normal_cdf(double x) noexcept;
/// Inverse of normal_cdf; -inf at 0 and +inf at 1.
double normal_quantile(double p);

/// Probabilists' Hermite polynomial He_q(x): He_0 = 1, He_1 = x,
/// He_{q+1} = x He_q - q He_{q-1}. Orthogonal under N(0,1) with norm q!.
double hermite_poly(int q, double x);

/// He_0(x), ..., He_qmax(x).
std::vector<double> hermite_poly_all(int qmax, double x);

double factorial(int q);

// ---------------------------------------------------------------------------
// Transforms G of the latent Gaussian.

/// Closed interval [lo, hi]; either end may be infinite.
struct Interval {
  double lo;
  double hi;
};

/// A measurable transform G together with the level-set solver
/// x -> {s : G(s) <= x}. The solver returns at most four disjoint intervals in
/// increasing order.
class Subordinator {
 public:
  enum class Kind {
    Identity,
    MeanShift,
    Scale,
    Affine,
    Square,
    AffineSquare,
    SplitSquare,
    Abs,
    QuantileTransform,
    MonotoneMap,
    Generic,
  };

  using RealFn = std::function<double(double)>;

  static Subordinator identity();
  static Subordinator mean_shift(double mu);
  static Subordinator scale(double sigma);
  /// sigma * s + mu.
  static Subordinator affine(double sigma, double mu);
  static Subordinator square();
  /// a s^2 + b s + c.
  static Subordinator affine_square(double a, double b, double c);
  /// a_pos s^2 for s >= 0, a_neg s^2 for s < 0.
  static Subordinator split_square(double a_pos, double a_neg);
  static Subordinator abs();
  /// F^{-1}(Phi(s)) for a continuous target distribution F with inverse.
  static Subordinator quantile_transform(RealFn cdf, RealFn inverse_cdf, std::string label);
  /// h(inner(s)) for a strictly increasing h with inverse h_inv.
  static Subordinator monotone_map(RealFn h, RealFn h_inv, Subordinator inner, std::string label);
  /// Arbitrary G without a level-set solver; coefficients fall back to a dense trapezoid rule.
  static Subordinator generic(RealFn g, std::string label);

  double operator()(double s) const;
  Kind kind() const noexcept { return kind_; }
  std::string name() const;

  bool has_region() const noexcept { return kind_ != Kind::Generic; }
  std::vector<Interval> region(double x) const;

  /// P(G(X) <= x) for X ~ N(0,1).
  double marginal_cdf(double x) const;
  /// Smallest x (to bisection precision) with marginal_cdf(x) >= p.
  double marginal_quantile(double p) const;

 private:
  struct GenericTable;

  Subordinator(Kind kind, std::array<double, 3> params) : kind_(kind), p_(params) {}

  Kind kind_;
  std::array<double, 3> p_{};
  RealFn f_;
  RealFn g_;
  std::shared_ptr<const Subordinator> inner_;
  std::shared_ptr<GenericTable> table_;
  std::string label_;
};

/// Parses CLI transform names: identity, square, abs, meanshift:MU,
/// scale:SIGMA, affine:SIGMA,MU, affinesquare:A,B,C, splitsquare:APOS,ANEG.
Subordinator parse_subordinator(const std::string& spec);

// ---------------------------------------------------------------------------
// Hermite coefficients J_q(x) = E[1{G(X) <= x} He_q(X)].

struct Coefficient {
  double value = 0.0;
  std::string method;  // "gauss-kronrod" or "trapezoid"
  bool reduced_accuracy = false;
};

/// Integration window; the Gaussian mass outside is below 1e-16.
inline constexpr double kIntegrationCutoff = 8.5;

Coefficient hermite_coeff(const Subordinator& g, int q, double x);

/// Adaptive Gauss-Kronrod integral of f over [a, b]; panels are split until their error estimate falls below
/// tol times the L1 mass of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13);

struct HermiteInfo {
  int rank = 0;
  int qmax_scanned = 0;
  std::vector<double> grid;      // levels x at which coefficients were certified
  std::vector<double> grid_sup;  // sup_x |J_q(x)| for q = 1..qmax_scanned
  std::function<double(int, double)> coefficients;
};

inline constexpr double kRankThreshold = 1e-6;

/// 201 marginal quantiles of G(X) at probability levels 0.005..0.995.
std::vector<double> quantile_grid(const Subordinator& g, std::size_t points = 201);

/// Smallest q <= qmax with sup over the quantile grid of |J_q| > 1e-6.
/// Throws NumericError("rank exceeds qmax") when none qualifies.
HermiteInfo hermite_rank(const Subordinator& g, int qmax);

// ---------------------------------------------------------------------------
// Normalization d_{n,m}.

enum class NormalizationSource { ExactDoubleSum, AsymptoticFormula, Estimated };

std::string to_string(NormalizationSource source);

struct Normalization {
  std::size_t n = 0;
  int m = 1;
  double hurst = 0.5;    // 1 - mD/2
  double l_const = 1.0;  // C in rho(k) ~ C k^{-D}
  double value = 1.0;    // d_{n,m}
  NormalizationSource source = NormalizationSource::ExactDoubleSum;
};

/// Exact below this length, asymptotic above.
inline constexpr std::size_t kExactNormalizationLimit = 8192;

NormalizationSource default_source(std::size_t n) noexcept;

/// d_{n,m}^2 = Var(sum_{i<=n} He_m(X_i)); requires 0 < mD < 1.
Normalization normalization_dn(std::size_t n, int m, const sim::GaussianModel& model, NormalizationSource source);

/// m! * sum_{i,j<=n} rho(i-j)^m from an explicit autocovariance (rho.size() >= n).
double exact_dn_squared(std::span<const double> rho, std::size_t n, int m);

/// n^H (C / (H(2H-1)))^{1/2}: the m = 1 normalization with an estimated
/// tail constant C. Equals n^H when C = H(2H-1), the fGn value.
Normalization normalization_estimated(std::size_t n, double hurst, double c_hat);

// ---------------------------------------------------------------------------
// Reduction principle.

/// sup over l <= n and grid levels x of
/// |sum_{j<=l} (1{G(X_j) <= x} - sum_{q<=order} J_q(x)/q! He_q(X_j))|,
/// unnormalized. `coeffs[i][q]` holds J_q(grid[i]) for q = 0..order (J_0 = F).
double reduction_sup(std::span<const double> latent, const Subordinator& g, std::span<const double> grid,
                     const std::vector<std::vector<double>>& coeffs, int order);

/// J_q(grid[i]) for q = 0..order.
std::vector<std::vector<double>> coefficient_table(const Subordinator& g, std::span<const double> grid, int order);

/// Monte Carlo mean over reps of the sup residual normalized by d_{n,m},
/// with the expansion truncated at order m and a 101-point quantile grid.
double reduction_residual(const sim::GaussianModel& model, const Subordinator& g, int m, std::size_t n,
                          std::size_t reps, std::uint64_t seed);

}  // namespace lrdcp::subordinate
