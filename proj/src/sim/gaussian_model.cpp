#include <cmath>
#include <sstream>

#include "lrdcp/error.hpp"
#include "lrdcp/sim.hpp"

namespace lrdcp::sim {

namespace {

std::vector<double> farima00_autocov(double d, std::size_t count) {
  std::vector<double> rho(count);
  if (count == 0) return rho;
  rho[0] = 1.0;
  for (std::size_t k = 1; k < count; ++k) {
    const double kk = static_cast<double>(k);
    rho[k] = rho[k - 1] * (kk - 1.0 + d) / (kk - d);
  }
  return rho;
}

// Lags h with |a1|^|h| below 1e-18 do not contribute in double precision.
std::size_t ar_truncation(double a1) {
  if (a1 == 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(std::log(1e-18) / std::log(std::abs(a1))));
}

// sum_h a1^|h| rho_u(|k + h|) for k = 0..count-1, i.e. (1 - a1^2) times the
// autocovariance of the AR(1)-filtered input.
std::vector<double> ar_filtered(double a1, const std::vector<double>& rho_u, std::size_t count) {
  const std::size_t hmax = ar_truncation(a1);
  std::vector<double> out(count, 0.0);
  for (std::size_t k = 0; k < count; ++k) {
    double s = rho_u[k];
    double w = 1.0;
    for (std::size_t h = 1; h <= hmax; ++h) {
      w *= a1;
      const std::size_t lo = k >= h ? k - h : h - k;
      s += w * (rho_u[k + h] + rho_u[lo]);
    }
    out[k] = s;
  }
  return out;
}

}  // namespace

GaussianModel GaussianModel::fgn(double hurst) {
  GaussianModel m;
  m.kind = ModelKind::Fgn;
  m.hurst = hurst;
  m.validate();
  return m;
}

GaussianModel GaussianModel::farima00(double d) {
  GaussianModel m;
  m.kind = ModelKind::Farima00;
  m.d = d;
  m.validate();
  return m;
}

GaussianModel GaussianModel::farima10(double d, double a1) {
  GaussianModel m;
  m.kind = ModelKind::Farima10;
  m.d = d;
  m.a1 = a1;
  m.validate();
  return m;
}

GaussianModel GaussianModel::ar1(double a1) {
  GaussianModel m;
  m.kind = ModelKind::Ar1;
  m.a1 = a1;
  m.validate();
  return m;
}

void GaussianModel::validate() const {
  switch (kind) {
    case ModelKind::Fgn:
      if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("fgn requires 0 < H < 1");
      break;
    case ModelKind::Farima10:
      if (!(a1 > -1.0 && a1 < 1.0)) throw DomainError("farima10 requires -1 < a1 < 1");
      [[fallthrough]];
    case ModelKind::Farima00:
      if (!(d > 0.0 && d < 0.5)) throw DomainError("farima requires 0 < d < 0.5");
      break;
    case ModelKind::Ar1:
      if (!(a1 > -1.0 && a1 < 1.0)) throw DomainError("ar1 requires -1 < a1 < 1");
      break;
  }
}

double GaussianModel::implied_hurst() const {
  switch (kind) {
    case ModelKind::Fgn: return hurst;
    case ModelKind::Farima00:
    case ModelKind::Farima10: return d + 0.5;
    case ModelKind::Ar1: return 0.5;
  }
  return 0.5;
}

bool GaussianModel::long_memory() const {
  switch (kind) {
    case ModelKind::Fgn: return hurst > 0.5;
    case ModelKind::Farima00:
    case ModelKind::Farima10: return true;
    case ModelKind::Ar1: return false;
  }
  return false;
}

std::pair<double, double> GaussianModel::tail_constants() const {
  validate();
  switch (kind) {
    case ModelKind::Fgn:
      if (!(hurst > 0.5)) throw DomainError("fgn with H <= 1/2 is not long-range dependent");
      return {2.0 - 2.0 * hurst, hurst * (2.0 * hurst - 1.0)};
    case ModelKind::Farima00:
      return {1.0 - 2.0 * d, std::tgamma(1.0 - d) / std::tgamma(d)};
    case ModelKind::Farima10: {
      // The filter multiplies the spectral density at the origin by 1/(1-a1)^2.
      const std::size_t hmax = ar_truncation(a1);
      const auto rho_u = farima00_autocov(d, hmax + 2);
      const double s0 = ar_filtered(a1, rho_u, 1)[0];
      const double c = std::tgamma(1.0 - d) / std::tgamma(d) * (1.0 + a1) / (1.0 - a1) / s0;
      return {1.0 - 2.0 * d, c};
    }
    case ModelKind::Ar1:
      throw DomainError("ar1 is short-range dependent: no tail constants");
  }
  return {0.0, 0.0};
}

std::string GaussianModel::describe() const {
  std::ostringstream ss;
  ss.precision(17);
  switch (kind) {
    case ModelKind::Fgn: ss << "fgn(H=" << hurst << ")"; break;
    case ModelKind::Farima00: ss << "farima00(d=" << d << ")"; break;
    case ModelKind::Farima10: ss << "farima10(d=" << d << ",a1=" << a1 << ")"; break;
    case ModelKind::Ar1: ss << "ar1(a1=" << a1 << ")"; break;
  }
  return ss.str();
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Fgn: return "fgn";
    case ModelKind::Farima00: return "farima00";
    case ModelKind::Farima10: return "farima10";
    case ModelKind::Ar1: return "ar1";
  }
  return "?";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "fgn") return ModelKind::Fgn;
  if (name == "farima00" || name == "farima") return ModelKind::Farima00;
  if (name == "farima10") return ModelKind::Farima10;
  if (name == "ar1") return ModelKind::Ar1;
  throw DomainError("unknown model '" + name + "' (expected fgn, farima00, farima10, ar1)");
}

double fgn_autocov(double hurst, long k) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("fgn_autocov requires 0 < H < 1");
  if (k == 0) return 1.0;
  const double kk = std::abs(static_cast<double>(k));
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(kk - 1.0, h2));
}

std::vector<double> model_autocov_sequence(const GaussianModel& model, std::size_t n) {
  model.validate();
  std::vector<double> rho(n);
  switch (model.kind) {
    case ModelKind::Fgn:
      for (std::size_t k = 0; k < n; ++k) rho[k] = fgn_autocov(model.hurst, static_cast<long>(k));
      break;
    case ModelKind::Farima00:
      rho = farima00_autocov(model.d, n);
      break;
    case ModelKind::Farima10: {
      const std::size_t hmax = ar_truncation(model.a1);
      const auto rho_u = farima00_autocov(model.d, n + hmax + 1);
      rho = ar_filtered(model.a1, rho_u, n);
      const double g0 = rho.empty() ? 1.0 : rho[0];
      for (auto& r : rho) r /= g0;
      break;
    }
    case ModelKind::Ar1: {
      double p = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        rho[k] = p;
        p *= model.a1;
      }
      break;
    }
  }
  return rho;
}

double model_autocov(const GaussianModel& model, long k) {
  k = std::abs(k);
  if (model.kind == ModelKind::Fgn) {
    model.validate();
    return fgn_autocov(model.hurst, k);
  }
  if (model.kind == ModelKind::Ar1) {
    model.validate();
    return std::pow(model.a1, static_cast<double>(k));
  }
  return model_autocov_sequence(model, static_cast<std::size_t>(k) + 1).back();
}

std::size_t ar_burn_in(double a1) {
  const auto base = static_cast<std::size_t>(std::ceil(1.0 / (1.0 - std::abs(a1))));
  return std::max<std::size_t>(100, 10 * base);
}

// Unfiltered variance ratio for the FARIMA(1,d,0) construction: Var(x_t) when
// x_t = a1 x_{t-1} + u_t with u standardized FARIMA(0,d,0).
double farima10_variance(double d, double a1) {
  const std::size_t hmax = ar_truncation(a1);
  const auto rho_u = farima00_autocov(d, hmax + 2);
  return ar_filtered(a1, rho_u, 1)[0] / (1.0 - a1 * a1);
}

}  // namespace lrdcp::sim
