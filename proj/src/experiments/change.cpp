#include <cmath>
#include <sstream>

#include "lrdcp/error.hpp"
#include "lrdcp/experiments.hpp"

namespace lrdcp::experiments {

using subordinate::normal_cdf;
using subordinate::normal_pdf;
using subordinate::normal_quantile;

std::size_t ChangeSpec::break_index(std::size_t n) const {
  if (!(tau > 0.0 && tau <= 1.0)) throw DomainError("change fraction tau must lie in (0, 1]");
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * tau + 1e-12));
}

std::vector<double> apply_change(std::span<const double> latent, const ChangeSpec& spec) {
  const std::size_t k = std::min(spec.break_index(latent.size()), latent.size());
  std::vector<double> y(latent.size());
  for (std::size_t i = 0; i < latent.size(); ++i) y[i] = i < k ? spec.pre(latent[i]) : spec.post(latent[i]);
  return y;
}

sim::TimeSeries inject_change(const sim::GaussianModel& model, const ChangeSpec& spec, std::size_t n,
                              const SeedSpec& seed) {
  auto latent = sim::simulate(model, n, seed);
  return sim::TimeSeries(apply_change(latent.values(), spec), sim::Provenance{model, seed});
}

ChangeSpec no_change() { return ChangeSpec{}; }

ChangeSpec mean_shift_change(double mu, double tau) {
  return {Subordinator::identity(), Subordinator::mean_shift(mu), tau};
}

ChangeSpec variance_change(double sigma, double tau) {
  return {Subordinator::identity(), Subordinator::scale(sigma), tau};
}

ChangeSpec mean_variance_change(double sigma, double mu, double tau) {
  return {Subordinator::identity(), Subordinator::affine(sigma, mu), tau};
}

ChangeSpec chi_square_change(double a, double mu, double tau) {
  return {Subordinator::square(), Subordinator::affine_square(1.0, a, mu), tau};
}

ChangeSpec multiple_hermite_preset(double a, double mu, double tau) {
  if (!(a > 0.0)) throw DomainError("multiple Hermite preset requires a > 0");
  // Phi^{-1}(2 Phi(y) - 1) maps |X| to a standard normal.
  auto fold = [](double y) { return normal_quantile(2.0 * normal_cdf(y) - 1.0); };
  auto unfold = [](double z) { return normal_quantile((normal_cdf(z) + 1.0) / 2.0); };
  auto pre = Subordinator::monotone_map(fold, unfold, Subordinator::abs(), "multihermite_pre");

  const auto inner = Subordinator::split_square(a, 1.0);
  auto to_normal = [inner, mu](double y) { return normal_quantile(inner.marginal_cdf(y)) + mu; };
  auto from_normal = [inner, mu](double z) { return inner.marginal_quantile(normal_cdf(z - mu)); };
  std::ostringstream label;
  label << "multihermite_post:" << a << "," << mu;
  auto post = Subordinator::monotone_map(to_normal, from_normal, inner, label.str());
  return {pre, post, tau};
}

std::string to_string(AlternativeKind kind) {
  switch (kind) {
    case AlternativeKind::MeanShift: return "meanshift";
    case AlternativeKind::VarianceChange: return "variance";
    case AlternativeKind::MeanVariance: return "meanvar";
    case AlternativeKind::Mixture: return "mixture";
    case AlternativeKind::ChiSquareScale: return "chisquare";
  }
  return "?";
}

std::string LocalAlternative::rate_description() const {
  switch (kind) {
    case AlternativeKind::MeanShift: return "mu_n ~ C d_n / n";
    case AlternativeKind::VarianceChange: return "sigma_n - 1 ~ C d_n / n";
    case AlternativeKind::MeanVariance: return "mu_n ~ C1 d_n / n, sigma_n - 1 ~ C2 d_n / n";
    case AlternativeKind::Mixture: return "mixture weight ~ d_n / n";
    case AlternativeKind::ChiSquareScale: return "a_n - 1 ~ C d_n / n";
  }
  return "";
}

double local_alternative_g(const LocalAlternative& alt, double x) {
  const double f = alt.density ? alt.density(x) : normal_pdf(x);
  switch (alt.kind) {
    case AlternativeKind::MeanShift: return alt.c1 * f;
    case AlternativeKind::VarianceChange: return alt.c1 * x * f;
    case AlternativeKind::MeanVariance: return f * (alt.c1 + alt.c2 * x);
    case AlternativeKind::Mixture: {
      const double base = alt.cdf ? alt.cdf(x) : normal_cdf(x);
      const double target = alt.mixture_cdf ? alt.mixture_cdf(x) : base;
      return alt.c1 * (target - base);
    }
    case AlternativeKind::ChiSquareScale:
      return x >= 0.0 ? alt.c1 * std::sqrt(x) * normal_pdf(std::sqrt(x)) : 0.0;
  }
  return 0.0;
}

}  // namespace lrdcp::experiments
