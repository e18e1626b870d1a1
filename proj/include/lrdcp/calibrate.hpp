#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrdcp/estimators.hpp"
#include "lrdcp/rng.hpp"
#include "lrdcp/stats.hpp"

namespace lrdcp::calibrate {

/// Tent profile of a single change at fraction tau: t(1-tau) for t <= tau, tau(1-t) after.
double psi_tau(double t, double tau);

/// Order statistic at ceil((1-alpha) J) (1-based) of an ascending sample.
double empirical_quantile(std::span<const double> sorted, double alpha);

// ---------------------------------------------------------------------------
// Monte Carlo critical values on the raw statistic scale.

struct TableEntry {
  stats::StatisticKind kind = stats::StatisticKind::Ks;
  std::size_t n = 0;
  double hurst = 0.5;
  double alpha = 0.05;
  std::size_t reps = 0;  // J
  double value = 0.0;
};

class CriticalValueTable {
 public:
  CriticalValueTable() = default;
  explicit CriticalValueTable(std::uint64_t master_seed) : master_seed_(master_seed) {}

  /// Inserts or replaces the entry with the same (kind, n, H, alpha, J).
  void insert(const TableEntry& entry);
  const std::vector<TableEntry>& entries() const noexcept { return entries_; }

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  void set_master_seed(std::uint64_t seed) noexcept { master_seed_ = seed; }
  /// Optional creation stamp; written to JSON only when set.
  const std::string& created() const noexcept { return created_; }
  void set_created(std::string stamp) { created_ = std::move(stamp); }

  /// Exact entry (largest J on duplicates) or linear interpolation in H
  /// between the nearest bracketing entries with the same (kind, n, alpha).
  std::optional<double> lookup(stats::StatisticKind kind, std::size_t n, double hurst, double alpha) const;

  std::string to_json() const;
  static CriticalValueTable from_json(const std::string& text);
  static CriticalValueTable load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  std::uint64_t master_seed_ = 0;
  std::string created_;
  std::vector<TableEntry> entries_;
};

/// Raw KS, CvM, CUSUM and Wilcoxon values of J simulated fGn(H) series of
/// length n; column s holds statistic kAllStatistics[s], sorted ascending.
/// Series j uses seed derive_seed(seed, {n, real_tag(H), j}) for every statistic.
std::array<std::vector<double>, 4> null_raw_sample(std::size_t n, double hurst, std::size_t reps, std::uint64_t seed);

std::vector<TableEntry> mc_critical_values(stats::StatisticKind kind, std::size_t n, double hurst,
                                           std::span<const double> alphas, std::size_t reps, std::uint64_t seed);

/// Lazily simulated null distributions on the H-grid 0.50, 0.51, ..., 0.99,
/// with linear interpolation between neighbouring grid points.
class NullDistributionCache {
 public:
  static constexpr double kGridLo = 0.50;
  static constexpr double kGridStep = 0.01;
  static constexpr std::size_t kGridPoints = 50;

  NullDistributionCache(std::size_t reps, std::uint64_t seed) : reps_(reps), seed_(seed) {}

  static double grid_hurst(std::size_t index) noexcept;
  /// Grid indices whose values are needed to interpolate at H.
  static std::pair<std::size_t, std::size_t> bracket(double hurst) noexcept;

  /// Simulates the null sample for (n, grid index) if not cached yet.
  void ensure(std::size_t n, std::size_t index);
  double critical(stats::StatisticKind kind, std::size_t n, double hurst, double alpha);

  std::size_t reps() const noexcept { return reps_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  using Sample = std::array<std::vector<double>, 4>;
  const Sample& sample(std::size_t n, std::size_t index);

  std::size_t reps_;
  std::uint64_t seed_;
  std::mutex mutex_;
  std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const Sample>> cache_;
};

// ---------------------------------------------------------------------------
// Limit functionals.

struct Shift {
  double c = 0.0;
  double tau = 0.5;
};

struct LimitFunctionalSample {
  int m = 1;
  double hurst = 0.5;
  std::size_t grid_size = 1024;
  std::vector<double> values;
};

/// One path of the bridge Z(t) - t Z(1) of the order-m Hermite process at
/// t = i/grid, i = 0..grid. Endpoints are exactly zero.
std::vector<double> limit_bridge_path(int m, double hurst, std::size_t grid, Rng& rng);

/// reps realizations of sup_t |Z(t) - t Z(1) + C psi_tau(t)|.
LimitFunctionalSample limit_functional(int m, double hurst, std::size_t grid, std::size_t reps,
                                       std::optional<Shift> shift, std::uint64_t seed);

/// (1-alpha) quantile of the unshifted functional.
double limit_quantile(int m, double hurst, double alpha, std::size_t grid, std::size_t reps, std::uint64_t seed);

/// P(sup|B_H bridge + C psi_tau| > q_{1-alpha,H}) with q from an independent stream.
double asymptotic_power(double c, double tau, double hurst, double alpha, std::size_t reps, std::uint64_t seed,
                        std::size_t grid = 1024);

// ---------------------------------------------------------------------------
// Testing.

enum class CalibrationMode { MonteCarlo, Asymptotic };
enum class HurstSource { Known, Whittle, Split };

std::string to_string(CalibrationMode mode);
std::string to_string(HurstSource source);
CalibrationMode parse_calibration_mode(const std::string& name);
HurstSource parse_hurst_source(const std::string& name);

/// Constant multiplying the limit quantile in asymptotic mode for Gaussian
/// data: sup|J_1| = phi(0) (KS), int J_1^2 dPhi (CvM, applied to q^2),
/// |int J_1 dPhi| = 1/(2 sqrt(pi)) (Wilcoxon), 1 (CUSUM).
double asymptotic_constant(stats::StatisticKind kind);

struct TestOptions {
  stats::StatisticKind kind = stats::StatisticKind::Cvm;
  double alpha = 0.05;
  HurstSource hurst_source = HurstSource::Known;
  std::optional<double> hurst;  // required for Known
  CalibrationMode calibration = CalibrationMode::MonteCarlo;
  /// Rescale the normalization by the estimated tail constant C-hat.
  bool scale_correction = false;
  std::size_t reps = 1000;  // J for Monte Carlo calibration
  std::uint64_t seed = 1;
  std::size_t limit_grid = 1024;
  std::size_t limit_reps = 2000;
  const CriticalValueTable* table = nullptr;  // consulted first in MC mode
  NullDistributionCache* cache = nullptr;     // used when the table has no entry
};

stats::TestReport perform_test(std::span<const double> values, const TestOptions& options);

std::string report_to_json(const stats::TestReport& report);

}  // namespace lrdcp::calibrate
