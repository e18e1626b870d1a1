#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrdcp/rng.hpp"

namespace lrdcp::sim {

enum class ModelKind { Fgn, Farima00, Farima10, Ar1 };

/// The latent stationary Gaussian process. Every model is standardized to zero
/// mean and unit marginal variance.
struct GaussianModel {
  ModelKind kind = ModelKind::Fgn;
  double hurst = 0.5;  // Fgn
  double d = 0.0;      // Farima00, Farima10
  double a1 = 0.0;     // Farima10, Ar1

  static GaussianModel fgn(double hurst);
  static GaussianModel farima00(double d);
  static GaussianModel farima10(double d, double a1);
  static GaussianModel ar1(double a1);

  /// Throws DomainError if a parameter is outside its admissible range.
  void validate() const;

  /// Hurst coefficient of the partial sums (d + 1/2 for FARIMA, 1/2 for AR(1)).
  double implied_hurst() const;

  /// Whether rho(k) ~ C k^{-D} with 0 < D < 1.
  bool long_memory() const;

  /// (D, C) of the tail rho(k) ~ C k^{-D}; throws DomainError for AR(1).
  std::pair<double, double> tail_constants() const;

  std::string describe() const;

  friend bool operator==(const GaussianModel&, const GaussianModel&) = default;
};

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

struct Provenance {
  GaussianModel model;
  SeedSpec seed;
};

/// A sample path. Length >= 2, all values finite.
class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> values, std::optional<Provenance> provenance = std::nullopt);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  const std::optional<Provenance>& provenance() const noexcept { return provenance_; }
  std::vector<double> release() && { return std::move(values_); }

 private:
  std::vector<double> values_;
  std::optional<Provenance> provenance_;
};

/// Autocovariance of standardized fractional Gaussian noise,
/// (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2.
double fgn_autocov(double hurst, long k);

double model_autocov(const GaussianModel& model, long k);

/// rho(0), ..., rho(n-1).
std::vector<double> model_autocov_sequence(const GaussianModel& model, std::size_t n);

/// Burn-in used by the filtered constructions: 10 * ceil(1/(1-|a1|)), at least 100.
std::size_t ar_burn_in(double a1);

/// Exact-covariance sample of length n; a pure function of (model, n, seed).
TimeSeries simulate(const GaussianModel& model, std::size_t n, const SeedSpec& seed);

/// Same as simulate() but drawing from a caller-owned generator.
std::vector<double> simulate_values(const GaussianModel& model, std::size_t n, Rng& rng);

/// Circulant embedding of rho(0..n-1) into length 2(n-1). Returns the
/// eigenvalues (real DFT of the symmetrized vector).
std::vector<double> circulant_eigenvalues(std::span<const double> autocov);

}  // namespace lrdcp::sim
