#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "lrdcp/error.hpp"
#include "lrdcp/subordinate.hpp"

namespace lrdcp::subordinate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Interval> merge(std::vector<Interval> parts) {
  std::vector<Interval> out;
  parts.erase(std::remove_if(parts.begin(), parts.end(), [](const Interval& iv) { return !(iv.hi >= iv.lo); }),
              parts.end());
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& iv : parts) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

// {s : slope * s + intercept <= x}
std::vector<Interval> linear_le(double slope, double intercept, double x) {
  if (slope > 0.0) return {{-kInf, (x - intercept) / slope}};
  if (slope < 0.0) return {{(x - intercept) / slope, kInf}};
  if (intercept <= x) return {{-kInf, kInf}};
  return {};
}

// {s : a s^2 + b s + c <= x}
std::vector<Interval> quadratic_le(double a, double b, double c, double x) {
  if (a == 0.0) return linear_le(b, c, x);
  const double cc = c - x;
  const double disc = b * b - 4.0 * a * cc;
  if (disc < 0.0) {
    if (a > 0.0) return {};
    return {{-kInf, kInf}};
  }
  const double root = std::sqrt(disc);
  // Numerically stable pair of roots.
  const double qv = -0.5 * (b + std::copysign(root, b));
  double r1 = qv / a;
  double r2 = qv != 0.0 ? cc / qv : -r1;
  if (r1 > r2) std::swap(r1, r2);
  if (a > 0.0) return {{r1, r2}};
  return merge({{-kInf, r1}, {r2, kInf}});
}

// {s >= 0 : coef s^2 <= x} or {s <= 0 : coef s^2 <= x}
std::vector<Interval> half_square_le(double coef, double x, bool positive_side) {
  std::vector<Interval> out;
  const Interval side = positive_side ? Interval{0.0, kInf} : Interval{-kInf, 0.0};
  for (const auto& iv : quadratic_le(coef, 0.0, 0.0, x)) {
    const double lo = std::max(iv.lo, side.lo);
    const double hi = std::min(iv.hi, side.hi);
    if (hi >= lo) out.push_back({lo, hi});
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return ss.str();
}

std::vector<double> parse_params(const std::string& text, std::size_t expected, const std::string& name) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("transform '" + name + "': bad parameter '" + item + "'");
    }
  }
  if (out.size() != expected) {
    throw DomainError("transform '" + name + "' expects " + std::to_string(expected) + " parameter(s)");
  }
  return out;
}

}  // namespace

struct Subordinator::GenericTable {
  std::once_flag once;
  std::vector<double> values;      // sorted G(s_i)
  std::vector<double> cumulative;  // normalized cumulative Gaussian weight
};

Subordinator Subordinator::identity() { return Subordinator(Kind::Identity, {}); }
Subordinator Subordinator::mean_shift(double mu) { return Subordinator(Kind::MeanShift, {mu, 0, 0}); }

Subordinator Subordinator::scale(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("scale transform requires sigma > 0");
  return Subordinator(Kind::Scale, {sigma, 0, 0});
}

Subordinator Subordinator::affine(double sigma, double mu) {
  if (!(sigma > 0.0)) throw DomainError("affine transform requires sigma > 0");
  return Subordinator(Kind::Affine, {sigma, mu, 0});
}

Subordinator Subordinator::square() { return Subordinator(Kind::Square, {}); }

Subordinator Subordinator::affine_square(double a, double b, double c) {
  return Subordinator(Kind::AffineSquare, {a, b, c});
}

Subordinator Subordinator::split_square(double a_pos, double a_neg) {
  return Subordinator(Kind::SplitSquare, {a_pos, a_neg, 0});
}

Subordinator Subordinator::abs() { return Subordinator(Kind::Abs, {}); }

Subordinator Subordinator::quantile_transform(RealFn cdf, RealFn inverse_cdf, std::string label) {
  Subordinator s(Kind::QuantileTransform, {});
  s.f_ = std::move(cdf);
  s.g_ = std::move(inverse_cdf);
  s.label_ = std::move(label);
  return s;
}

Subordinator Subordinator::monotone_map(RealFn h, RealFn h_inv, Subordinator inner, std::string label) {
  Subordinator s(Kind::MonotoneMap, {});
  s.f_ = std::move(h);
  s.g_ = std::move(h_inv);
  s.inner_ = std::make_shared<const Subordinator>(std::move(inner));
  s.label_ = std::move(label);
  return s;
}

Subordinator Subordinator::generic(RealFn g, std::string label) {
  Subordinator s(Kind::Generic, {});
  s.f_ = std::move(g);
  s.table_ = std::make_shared<GenericTable>();
  s.label_ = std::move(label);
  return s;
}

double Subordinator::operator()(double s) const {
  switch (kind_) {
    case Kind::Identity: return s;
    case Kind::MeanShift: return s + p_[0];
    case Kind::Scale: return p_[0] * s;
    case Kind::Affine: return p_[0] * s + p_[1];
    case Kind::Square: return s * s;
    case Kind::AffineSquare: return (p_[0] * s + p_[1]) * s + p_[2];
    case Kind::SplitSquare: return (s >= 0.0 ? p_[0] : p_[1]) * s * s;
    case Kind::Abs: return std::abs(s);
    case Kind::QuantileTransform: return g_(normal_cdf(s));
    case Kind::MonotoneMap: return f_((*inner_)(s));
    case Kind::Generic: return f_(s);
  }
  return s;
}

std::string Subordinator::name() const {
  switch (kind_) {
    case Kind::Identity: return "identity";
    case Kind::MeanShift: return "meanshift:" + fmt(p_[0]);
    case Kind::Scale: return "scale:" + fmt(p_[0]);
    case Kind::Affine: return "affine:" + fmt(p_[0]) + "," + fmt(p_[1]);
    case Kind::Square: return "square";
    case Kind::AffineSquare: return "affinesquare:" + fmt(p_[0]) + "," + fmt(p_[1]) + "," + fmt(p_[2]);
    case Kind::SplitSquare: return "splitsquare:" + fmt(p_[0]) + "," + fmt(p_[1]);
    case Kind::Abs: return "abs";
    case Kind::QuantileTransform:
    case Kind::MonotoneMap:
    case Kind::Generic: return label_;
  }
  return "?";
}

std::vector<Interval> Subordinator::region(double x) const {
  switch (kind_) {
    case Kind::Identity: return linear_le(1.0, 0.0, x);
    case Kind::MeanShift: return linear_le(1.0, p_[0], x);
    case Kind::Scale: return linear_le(p_[0], 0.0, x);
    case Kind::Affine: return linear_le(p_[0], p_[1], x);
    case Kind::Square: return quadratic_le(1.0, 0.0, 0.0, x);
    case Kind::AffineSquare: return quadratic_le(p_[0], p_[1], p_[2], x);
    case Kind::SplitSquare: {
      auto parts = half_square_le(p_[1], x, false);
      const auto pos = half_square_le(p_[0], x, true);
      parts.insert(parts.end(), pos.begin(), pos.end());
      return merge(std::move(parts));
    }
    case Kind::Abs:
      if (x < 0.0) return {};
      return {{-x, x}};
    case Kind::QuantileTransform: {
      const double u = f_(x);
      if (u <= 0.0) return {};
      return {{-kInf, normal_quantile(std::min(u, 1.0))}};
    }
    case Kind::MonotoneMap: return inner_->region(g_(x));
    case Kind::Generic: break;
  }
  throw NumericError("transform '" + name() + "' has no level-set solver");
}

double Subordinator::marginal_cdf(double x) const {
  if (kind_ == Kind::Generic) {
    std::call_once(table_->once, [this] {
      constexpr double step = 1e-4;
      const auto count = static_cast<std::size_t>(std::llround(2.0 * kIntegrationCutoff / step)) + 1;
      std::vector<std::pair<double, double>> pts(count);
      double total = 0.0;
      for (std::size_t i = 0; i < count; ++i) {
        const double s = -kIntegrationCutoff + static_cast<double>(i) * step;
        pts[i] = {f_(s), normal_pdf(s)};
        total += pts[i].second;
      }
      std::sort(pts.begin(), pts.end());
      table_->values.resize(count);
      table_->cumulative.resize(count);
      double run = 0.0;
      for (std::size_t i = 0; i < count; ++i) {
        run += pts[i].second;
        table_->values[i] = pts[i].first;
        table_->cumulative[i] = run / total;
      }
    });
    const auto it = std::upper_bound(table_->values.begin(), table_->values.end(), x);
    if (it == table_->values.begin()) return 0.0;
    return table_->cumulative[static_cast<std::size_t>(it - table_->values.begin()) - 1];
  }
  double p = 0.0;
  for (const auto& iv : region(x)) p += normal_cdf(iv.hi) - normal_cdf(iv.lo);
  return std::clamp(p, 0.0, 1.0);
}

double Subordinator::marginal_quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("marginal_quantile requires 0 < p < 1");
  double lo = -1.0;
  double hi = 1.0;
  for (int i = 0; i < 2000 && marginal_cdf(lo) >= p; ++i) lo *= 2.0;
  for (int i = 0; i < 2000 && marginal_cdf(hi) < p; ++i) hi *= 2.0;
  if (marginal_cdf(lo) >= p || marginal_cdf(hi) < p) {
    throw NumericError("cannot bracket quantile " + fmt(p) + " of " + name());
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (marginal_cdf(mid) >= p) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

Subordinator parse_subordinator(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (name == "identity") return Subordinator::identity();
  if (name == "square") return Subordinator::square();
  if (name == "abs") return Subordinator::abs();
  if (name == "meanshift") return Subordinator::mean_shift(parse_params(args, 1, name)[0]);
  if (name == "scale") return Subordinator::scale(parse_params(args, 1, name)[0]);
  if (name == "affine") {
    const auto p = parse_params(args, 2, name);
    return Subordinator::affine(p[0], p[1]);
  }
  if (name == "affinesquare") {
    const auto p = parse_params(args, 3, name);
    return Subordinator::affine_square(p[0], p[1], p[2]);
  }
  if (name == "splitsquare") {
    const auto p = parse_params(args, 2, name);
    return Subordinator::split_square(p[0], p[1]);
  }
  throw DomainError("unknown transform '" + spec +
                    "' (expected identity, square, abs, meanshift:MU, scale:S, affine:S,MU, affinesquare:A,B,C, "
                    "splitsquare:AP,AN)");
}

}  // namespace lrdcp::subordinate
