#include <cmath>
#include <functional>
#include <numbers>

#include "core/fft.hpp"
#include "lrdcp/error.hpp"
#include "lrdcp/estimators.hpp"

namespace lrdcp::estimators {

std::string to_string(HurstMethod method) { return method == HurstMethod::Whittle ? "whittle" : "split_whittle"; }

HurstMethod parse_hurst_method(const std::string& name) {
  if (name == "whittle") return HurstMethod::Whittle;
  if (name == "split" || name == "split_whittle") return HurstMethod::SplitWhittle;
  throw DomainError("unknown Hurst estimator '" + name + "' (expected whittle or split)");
}

std::vector<PeriodogramPoint> periodogram(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 4) throw DomainError("periodogram requires n >= 4");
  const auto spectrum = detail::dft_real(values);
  const double two_pi = 2.0 * std::numbers::pi;
  const double scale = 1.0 / (two_pi * static_cast<double>(n));
  std::vector<PeriodogramPoint> out(n / 2);
  for (std::size_t j = 1; j <= n / 2; ++j)
    out[j - 1] = {two_pi * static_cast<double>(j) / static_cast<double>(n), std::norm(spectrum[j]) * scale};
  return out;
}

std::vector<PeriodogramPoint> periodogram(const sim::TimeSeries& series) { return periodogram(series.values()); }

std::size_t default_bandwidth(std::size_t n) {
  const auto target = static_cast<unsigned long long>(n) * n;
  auto m = static_cast<unsigned long long>(std::cbrt(static_cast<double>(target)));
  while ((m + 1) * (m + 1) * (m + 1) <= target) ++m;
  while (m > 0 && m * m * m > target) --m;
  return static_cast<std::size_t>(m);
}

double whittle_objective(std::span<const PeriodogramPoint> pgram, std::size_t bandwidth, double hurst) {
  double weighted = 0.0;
  double logs = 0.0;
  for (std::size_t j = 0; j < bandwidth; ++j) {
    weighted += std::pow(pgram[j].frequency, 2.0 * hurst - 1.0) * pgram[j].ordinate;
    logs += std::log(pgram[j].frequency);
  }
  const double m = static_cast<double>(bandwidth);
  return std::log(weighted / m) - (2.0 * hurst - 1.0) * logs / m;
}

namespace {

double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

HurstEstimate finish(double raw, HurstMethod method, std::size_t bandwidth) {
  HurstEstimate out;
  out.raw_value = raw;
  out.value = std::max(raw, kHurstFloor);
  out.method = method;
  out.bandwidth = bandwidth;
  return out;
}

}  // namespace

HurstEstimate local_whittle(std::span<const double> values, std::optional<std::size_t> bandwidth) {
  const std::size_t n = values.size();
  if (n < 4) throw DomainError("local Whittle estimation requires n >= 4");
  const std::size_t m = bandwidth.value_or(std::max<std::size_t>(2, default_bandwidth(n)));
  if (m < 2 || m > n / 2) throw DomainError("local Whittle bandwidth must satisfy 2 <= m <= n/2");
  const auto pgram = periodogram(values);
  bool any = false;
  for (std::size_t j = 0; j < m; ++j) any = any || pgram[j].ordinate > 0.0;
  if (!any) throw NumericError("local Whittle: all in-band periodogram ordinates are zero (degenerate input)");
  const double h = golden_section([&](double hh) { return whittle_objective(pgram, m, hh); }, 0.01, 0.99, 1e-5);
  return finish(h, HurstMethod::Whittle, m);
}

HurstEstimate local_whittle(const sim::TimeSeries& series, std::optional<std::size_t> bandwidth) {
  return local_whittle(series.values(), bandwidth);
}

HurstEstimate split_whittle_at(std::span<const double> values, std::size_t k) {
  const std::size_t n = values.size();
  if (n < 8) throw DomainError("split Whittle estimation requires n >= 8");
  if (k == 0 || k >= n || k < 4 || n - k < 4) {
    auto whole = local_whittle(values);
    whole.method = HurstMethod::SplitWhittle;
    whole.split_k = k;
    whole.fallback = k != 0 && k != n;
    return whole;
  }
  const auto first = local_whittle(values.subspan(0, k));
  const auto second = local_whittle(values.subspan(k));
  const double w = static_cast<double>(k) / static_cast<double>(n);
  auto out = finish(w * first.raw_value + (1.0 - w) * second.raw_value, HurstMethod::SplitWhittle,
                    first.bandwidth + second.bandwidth);
  out.split_k = k;
  return out;
}

HurstEstimate split_whittle(std::span<const double> values, stats::StatisticKind kind) {
  if (values.size() < 8) throw DomainError("split Whittle estimation requires n >= 8");
  return split_whittle_at(values, stats::changepoint_estimate(values, kind));
}

HurstEstimate split_whittle(const sim::TimeSeries& series, stats::StatisticKind kind) {
  return split_whittle(series.values(), kind);
}

}  // namespace lrdcp::estimators
