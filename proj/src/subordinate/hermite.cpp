#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lrdcp/error.hpp"
#include "lrdcp/subordinate.hpp"

namespace lrdcp::subordinate {

double normal_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("normal_quantile requires 0 <= p <= 1");
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double hermite_poly(int q, double x) {
  if (q < 0) throw DomainError("hermite_poly requires q >= 0");
  if (q == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < q; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> hermite_poly_all(int qmax, double x) {
  std::vector<double> h(static_cast<std::size_t>(std::max(qmax, 0)) + 1);
  h[0] = 1.0;
  if (qmax >= 1) h[1] = x;
  for (int k = 1; k < qmax; ++k) h[k + 1] = x * h[k] - k * h[k - 1];
  return h;
}

double factorial(int q) { return std::tgamma(q + 1.0); }

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

// Panels are accepted against a fixed target scaled by the L1 mass of the whole integrand: a relative test
// never settles on integrals that vanish, and a halved target would chase roundoff on narrow panels.
double integrate_panel(const std::function<double(double)>& f, double a, double b, double value, double err,
                       double target, int depth) {
  if (err <= target || depth >= 12) return value;
  const double mid = 0.5 * (a + b);
  double el = 0.0, er = 0.0;
  const double vl = Kronrod::integrate(f, a, mid, 0, 0.0, &el);
  const double vr = Kronrod::integrate(f, mid, b, 0, 0.0, &er);
  return integrate_panel(f, a, mid, vl, el, target, depth + 1) + integrate_panel(f, mid, b, vr, er, target, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  double err = 0.0, l1 = 0.0;
  const double v = Kronrod::integrate(f, a, b, 0, 0.0, &err, &l1);
  const double target = std::max(tol, 64.0 * std::numeric_limits<double>::epsilon()) * std::max(l1, 1.0);
  return integrate_panel(f, a, b, v, err, target, 0);
}

Coefficient hermite_coeff(const Subordinator& g, int q, double x) {
  if (q < 0) throw DomainError("hermite_coeff requires q >= 0");
  if (q > 50) throw DomainError("hermite_coeff requires q <= 50");
  const auto integrand = [q](double s) { return hermite_poly(q, s) * normal_pdf(s); };
  Coefficient out;
  if (g.has_region()) {
    out.method = "gauss-kronrod";
    for (const auto& iv : g.region(x)) {
      const double lo = std::max(iv.lo, -kIntegrationCutoff);
      const double hi = std::min(iv.hi, kIntegrationCutoff);
      if (hi > lo) out.value += integrate(integrand, lo, hi);
    }
    return out;
  }
  out.method = "trapezoid";
  out.reduced_accuracy = true;
  constexpr double step = 1e-4;
  const auto count = static_cast<long>(std::llround(2.0 * kIntegrationCutoff / step));
  double sum = 0.0;
  for (long i = 0; i <= count; ++i) {
    const double s = -kIntegrationCutoff + static_cast<double>(i) * step;
    if (g(s) <= x) sum += (i == 0 || i == count ? 0.5 : 1.0) * integrand(s);
  }
  out.value = sum * step;
  return out;
}

std::vector<double> quantile_grid(const Subordinator& g, std::size_t points) {
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double p = points == 1 ? 0.5 : 0.005 + 0.99 * static_cast<double>(i) / static_cast<double>(points - 1);
    grid[i] = g.marginal_quantile(p);
  }
  return grid;
}

HermiteInfo hermite_rank(const Subordinator& g, int qmax) {
  if (qmax < 1) throw DomainError("hermite_rank requires qmax >= 1");
  HermiteInfo info;
  info.grid = quantile_grid(g);
  info.coefficients = [g](int q, double x) { return hermite_coeff(g, q, x).value; };
  for (int q = 1; q <= qmax; ++q) {
    double sup = 0.0;
    for (double x : info.grid) sup = std::max(sup, std::abs(hermite_coeff(g, q, x).value));
    info.grid_sup.push_back(sup);
    info.qmax_scanned = q;
    if (sup > kRankThreshold) {
      info.rank = q;
      return info;
    }
  }
  throw NumericError("rank exceeds qmax=" + std::to_string(qmax) + " for transform " + g.name());
}

}  // namespace lrdcp::subordinate
