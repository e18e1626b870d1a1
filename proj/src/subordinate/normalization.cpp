#include <cmath>
#include <sstream>

#include "lrdcp/error.hpp"
#include "lrdcp/subordinate.hpp"

namespace lrdcp::subordinate {

std::string to_string(NormalizationSource source) {
  switch (source) {
    case NormalizationSource::ExactDoubleSum: return "exact_double_sum";
    case NormalizationSource::AsymptoticFormula: return "asymptotic_formula";
    case NormalizationSource::Estimated: return "estimated";
  }
  return "?";
}

NormalizationSource default_source(std::size_t n) noexcept {
  return n <= kExactNormalizationLimit ? NormalizationSource::ExactDoubleSum : NormalizationSource::AsymptoticFormula;
}

double exact_dn_squared(std::span<const double> rho, std::size_t n, int m) {
  if (rho.size() < n) throw DomainError("exact_dn_squared needs rho(0..n-1)");
  // sum_{i,j} rho(i-j)^m = n rho(0)^m + 2 sum_k (n-k) rho(k)^m
  double off = 0.0;
  for (std::size_t k = 1; k < n; ++k) off += static_cast<double>(n - k) * std::pow(rho[k], m);
  return factorial(m) * (static_cast<double>(n) * std::pow(rho[0], m) + 2.0 * off);
}

Normalization normalization_dn(std::size_t n, int m, const sim::GaussianModel& model, NormalizationSource source) {
  if (n < 1) throw DomainError("normalization_dn requires n >= 1");
  if (m < 1) throw DomainError("normalization_dn requires m >= 1");
  if (source == NormalizationSource::Estimated) {
    throw DomainError("use normalization_estimated for estimated normalizations");
  }
  const auto [dd, c] = model.tail_constants();
  if (!(m * dd < 1.0)) {
    std::ostringstream ss;
    ss << "long-memory condition 0 < mD < 1 violated: m=" << m << ", D=" << dd << " for " << model.describe();
    throw DomainError(ss.str());
  }
  Normalization out;
  out.n = n;
  out.m = m;
  out.hurst = 1.0 - m * dd / 2.0;
  out.l_const = c;
  out.source = source;
  if (source == NormalizationSource::ExactDoubleSum) {
    const auto rho = sim::model_autocov_sequence(model, n);
    out.value = std::sqrt(exact_dn_squared(rho, n, m));
  } else {
    const double md = m * dd;
    const double d2 = 2.0 * factorial(m) / ((1.0 - md) * (2.0 - md)) * std::pow(static_cast<double>(n), 2.0 - md) *
                      std::pow(c, m);
    out.value = std::sqrt(d2);
  }
  return out;
}

Normalization normalization_estimated(std::size_t n, double hurst, double c_hat) {
  if (!(hurst > 0.5 && hurst < 1.0)) throw DomainError("estimated normalization requires 1/2 < H < 1");
  if (!(c_hat > 0.0)) throw DomainError("estimated normalization requires C > 0");
  Normalization out;
  out.n = n;
  out.m = 1;
  out.hurst = hurst;
  out.l_const = c_hat;
  out.source = NormalizationSource::Estimated;
  out.value = std::pow(static_cast<double>(n), hurst) * std::sqrt(c_hat / (hurst * (2.0 * hurst - 1.0)));
  return out;
}

}  // namespace lrdcp::subordinate
