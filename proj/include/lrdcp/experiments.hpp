#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrdcp/calibrate.hpp"
#include "lrdcp/sim.hpp"
#include "lrdcp/stats.hpp"
#include "lrdcp/subordinate.hpp"

namespace lrdcp::experiments {

using subordinate::Subordinator;

// ---------------------------------------------------------------------------
// Change injection: Y_i = pre(X_i) for i <= floor(n tau), post(X_i) after,
// on one shared latent path.

struct ChangeSpec {
  Subordinator pre = Subordinator::identity();
  Subordinator post = Subordinator::identity();
  double tau = 1.0;  // 1 means no change

  /// Break index floor(n tau).
  std::size_t break_index(std::size_t n) const;
};

std::vector<double> apply_change(std::span<const double> latent, const ChangeSpec& spec);
sim::TimeSeries inject_change(const sim::GaussianModel& model, const ChangeSpec& spec, std::size_t n,
                              const SeedSpec& seed);

ChangeSpec no_change();
ChangeSpec mean_shift_change(double mu, double tau);
/// X -> sigma X after the break.
ChangeSpec variance_change(double sigma, double tau);
/// X -> sigma X + mu after the break.
ChangeSpec mean_variance_change(double sigma, double mu, double tau);
/// X^2 -> X^2 + a X + mu after the break.
ChangeSpec chi_square_change(double a, double mu, double tau);
/// G = Phi^{-1}(2 Phi(|x|) - 1) before the break and
/// Phi^{-1}(F*(G*(x))) + mu after, with G* = split square (a_pos = a, a_neg = 1)
/// and F* its marginal distribution. Data generator only.
ChangeSpec multiple_hermite_preset(double a, double mu, double tau);

// ---------------------------------------------------------------------------
// Local alternatives.

enum class AlternativeKind { MeanShift, VarianceChange, MeanVariance, Mixture, ChiSquareScale };

std::string to_string(AlternativeKind kind);

struct LocalAlternative {
  AlternativeKind kind = AlternativeKind::MeanShift;
  double c1 = 1.0;
  double c2 = 0.0;
  /// Density f_G of the pre-change marginal; standard normal when empty.
  std::function<double(double)> density;
  /// F and F* for Mixture; standard normal F when empty.
  std::function<double(double)> cdf;
  std::function<double(double)> mixture_cdf;

  std::string rate_description() const;
};

/// Drift g(x) of the local alternative: C f(x), C x f(x), f(x)(C1 + C2 x),
/// F*(x) - F(x), or C sqrt(x) phi(sqrt(x)) 1{x >= 0}.
double local_alternative_g(const LocalAlternative& alt, double x);

// ---------------------------------------------------------------------------
// Power studies.

enum class ScaleCorrection { Auto, On, Off };

struct PowerConfig {
  std::string scenario = "meanshift";  // null, meanshift, variance, meanvar, chisquare, multihermite
  std::vector<stats::StatisticKind> statistics{stats::StatisticKind::Cvm, stats::StatisticKind::Wilcoxon,
                                               stats::StatisticKind::Cusum};
  std::vector<calibrate::HurstSource> hurst_modes{calibrate::HurstSource::Known};
  std::vector<std::size_t> ns{100};
  std::vector<double> hursts{0.7};
  std::string model = "fgn";  // fgn, farima00, farima10, ar1
  double d = 0.2;
  double a1 = 0.6;
  double tau = 0.5;
  double mu = 1.0;
  double sigma = 1.0;  // post-change standard deviation
  double a = 0.5;      // linear coefficient of the chi-square scenario, a_n of the multihermite preset
  double alpha = 0.05;
  std::size_t reps = 1000;
  std::size_t calib_reps = 1000;  // J
  ScaleCorrection scale_correction = ScaleCorrection::Auto;
  std::uint64_t seed = 1;
};

/// Flat key=value text; '#' starts a comment; lists are comma separated.
PowerConfig parse_power_config(const std::string& text);
std::string describe_config(const PowerConfig& config);

ChangeSpec scenario_change(const PowerConfig& config);
/// Latent models of the study, one per H (fgn) or a single one otherwise.
std::vector<sim::GaussianModel> scenario_models(const PowerConfig& config);

struct PowerRow {
  std::string scenario;
  stats::StatisticKind kind;
  calibrate::HurstSource hurst_mode;
  std::size_t n;
  double hurst;
  double rate;          // NaN when every replicate failed
  std::size_t reps;     // replicates that produced a decision
  std::size_t failed;   // replicates whose estimation or calibration failed
};

struct PowerTable {
  std::vector<PowerRow> rows;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
};

PowerTable run_power_study(const PowerConfig& config);

/// CSV with header scenario,stat,hurst_mode,n,H,rate,reps.
std::string power_table_csv(const PowerTable& table);

// ---------------------------------------------------------------------------
// Asymptotic relative efficiency.

/// int phi^3 x^2 / int phi^3 (= 1/3), by quadrature.
double gaussian_ratio_r();

/// min over t in [kappa1, kappa2] (grid step `step`) of
/// (sqrt(q^2 + 2 q C1 psi + (C1^2 + C2^2 r) psi^2) - q) / psi.
double fstar(double c1, double c2, double q, double tau, double kappa1, double kappa2, double step = 1e-4);

/// Solves fstar(C1, C1 C2*/C1*, ...) = C1* for C1 by bisection and returns
/// (C1*/C1)^{1/(1-H)}.
double are_mean_variance(double c1_star, double c2_star, double q, double tau, double kappa1, double kappa2,
                         double hurst);

struct MeanShiftCheck {
  std::array<double, 4> limit_power{};   // KS, CvM, CUSUM, Wilcoxon
  std::array<double, 4> finite_power{};  // Monte Carlo at n with mu = C n^{H-1}
  std::size_t n = 400;
  double mu = 0.0;
};

MeanShiftCheck are_mean_shift_check(double hurst, double tau, double c, double alpha, std::size_t reps,
                                    std::uint64_t seed, std::size_t n = 400);

// ---------------------------------------------------------------------------
// Invariant suites.

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyOptions {
  std::vector<std::size_t> ns;  // suite-specific defaults when empty
  std::size_t reps = 0;         // suite-specific default when 0
  std::uint64_t seed = 1;
};

/// Suite names: sim, hermite, stats, estimators, reduction, calibrate, are, all.
std::vector<std::string> verify_suites();
std::vector<CheckResult> run_verify(const std::string& suite, const VerifyOptions& options);
std::string verify_to_json(const std::vector<CheckResult>& results);

}  // namespace lrdcp::experiments
