#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include "lrdcp/error.hpp"
#include "lrdcp/estimators.hpp"
#include "lrdcp/experiments.hpp"

namespace lrdcp::experiments {
namespace {

constexpr std::uint64_t kReplicateTag = 0x706f776572ULL;
constexpr std::uint64_t kCalibrationTag = 0x63616c6962ULL;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + s + "'", line);
  }
}

std::size_t to_size(const std::string& s, std::size_t line) {
  const double v = to_double(s, line);
  if (v < 0 || v != std::floor(v)) throw ParseError("expected a non-negative integer, got '" + s + "'", line);
  return static_cast<std::size_t>(v);
}

std::string join_doubles(const std::vector<double>& v) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < v.size(); ++i) ss << (i ? "," : "") << v[i];
  return ss.str();
}

bool use_scale_correction(const PowerConfig& c) {
  switch (c.scale_correction) {
    case ScaleCorrection::On: return true;
    case ScaleCorrection::Off: return false;
    case ScaleCorrection::Auto: return c.model != "fgn";
  }
  return false;
}

}  // namespace

PowerConfig parse_power_config(const std::string& text) {
  PowerConfig c;
  std::stringstream ss(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", line);
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    try {
      if (key == "scenario") {
        static const std::set<std::string> known{"null", "meanshift", "variance", "meanvar", "chisquare", "multihermite"};
        if (!known.count(value)) throw ParseError("unknown scenario '" + value + "'", line);
        c.scenario = value;
      } else if (key == "stat" || key == "stats") {
        c.statistics.clear();
        for (const auto& s : split_list(value)) c.statistics.push_back(stats::parse_statistic(s));
      } else if (key == "hurst_mode") {
        c.hurst_modes.clear();
        for (const auto& s : split_list(value)) c.hurst_modes.push_back(calibrate::parse_hurst_source(s));
      } else if (key == "n") {
        c.ns.clear();
        for (const auto& s : split_list(value)) c.ns.push_back(to_size(s, line));
      } else if (key == "H") {
        c.hursts.clear();
        for (const auto& s : split_list(value)) c.hursts.push_back(to_double(s, line));
      } else if (key == "model") {
        sim::parse_model_kind(value);
        c.model = value;
      } else if (key == "d") {
        c.d = to_double(value, line);
      } else if (key == "a1") {
        c.a1 = to_double(value, line);
      } else if (key == "tau") {
        c.tau = to_double(value, line);
      } else if (key == "mu") {
        c.mu = to_double(value, line);
      } else if (key == "sigma") {
        c.sigma = to_double(value, line);
      } else if (key == "sigma2") {
        c.sigma = std::sqrt(to_double(value, line));
      } else if (key == "a") {
        c.a = to_double(value, line);
      } else if (key == "alpha") {
        c.alpha = to_double(value, line);
      } else if (key == "reps") {
        c.reps = to_size(value, line);
      } else if (key == "J") {
        c.calib_reps = to_size(value, line);
      } else if (key == "scale_correction") {
        if (value == "auto") c.scale_correction = ScaleCorrection::Auto;
        else if (value == "on") c.scale_correction = ScaleCorrection::On;
        else if (value == "off") c.scale_correction = ScaleCorrection::Off;
        else throw ParseError("scale_correction must be auto, on or off", line);
      } else if (key == "seed") {
        c.seed = static_cast<std::uint64_t>(std::stoull(value));
      } else {
        throw ParseError("unknown key '" + key +
                             "' (valid: scenario, stat, hurst_mode, n, H, model, d, a1, tau, mu, sigma, sigma2, a, "
                             "alpha, reps, J, scale_correction, seed)",
                         line);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line);
    } catch (const std::exception&) {
      throw ParseError("invalid value '" + value + "' for key '" + key + "'", line);
    }
  }
  if (c.statistics.empty() || c.hurst_modes.empty() || c.ns.empty()) throw ParseError("stat, hurst_mode and n must be non-empty");
  return c;
}

std::string describe_config(const PowerConfig& c) {
  std::ostringstream ss;
  ss << "scenario=" << c.scenario << " stat=";
  for (std::size_t i = 0; i < c.statistics.size(); ++i) ss << (i ? "," : "") << stats::to_string(c.statistics[i]);
  ss << " hurst_mode=";
  for (std::size_t i = 0; i < c.hurst_modes.size(); ++i) ss << (i ? "," : "") << calibrate::to_string(c.hurst_modes[i]);
  ss << " n=";
  for (std::size_t i = 0; i < c.ns.size(); ++i) ss << (i ? "," : "") << c.ns[i];
  ss << " H=" << join_doubles(c.hursts) << " model=" << c.model << " d=" << c.d << " a1=" << c.a1 << " tau=" << c.tau
     << " mu=" << c.mu << " sigma=" << c.sigma << " a=" << c.a << " alpha=" << c.alpha << " reps=" << c.reps
     << " J=" << c.calib_reps << " scale_correction="
     << (c.scale_correction == ScaleCorrection::Auto ? "auto" : c.scale_correction == ScaleCorrection::On ? "on" : "off")
     << " seed=" << c.seed;
  return ss.str();
}

ChangeSpec scenario_change(const PowerConfig& c) {
  if (c.scenario == "null") return no_change();
  if (c.scenario == "meanshift") return mean_shift_change(c.mu, c.tau);
  if (c.scenario == "variance") return variance_change(c.sigma, c.tau);
  if (c.scenario == "meanvar") return mean_variance_change(c.sigma, c.mu, c.tau);
  if (c.scenario == "chisquare") return chi_square_change(c.a, c.mu, c.tau);
  if (c.scenario == "multihermite") return multiple_hermite_preset(c.a, c.mu, c.tau);
  throw DomainError("unknown scenario '" + c.scenario + "'");
}

std::vector<sim::GaussianModel> scenario_models(const PowerConfig& c) {
  switch (sim::parse_model_kind(c.model)) {
    case sim::ModelKind::Fgn: {
      std::vector<sim::GaussianModel> out;
      for (double h : c.hursts) out.push_back(sim::GaussianModel::fgn(h));
      return out;
    }
    case sim::ModelKind::Farima00: return {sim::GaussianModel::farima00(c.d)};
    case sim::ModelKind::Farima10: return {sim::GaussianModel::farima10(c.d, c.a1)};
    case sim::ModelKind::Ar1: return {sim::GaussianModel::ar1(c.a1)};
  }
  return {};
}

PowerTable run_power_study(const PowerConfig& c) {
  if (c.reps < 100) throw DomainError("power study requires reps >= 100");
  if (c.calib_reps < 100) throw DomainError("power study requires J >= 100");
  const auto change = scenario_change(c);
  const auto models = scenario_models(c);
  const bool correct = use_scale_correction(c);
  const std::uint64_t calib_seed = derive_seed(c.seed, {kCalibrationTag});
  calibrate::NullDistributionCache cache(c.calib_reps, calib_seed);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  PowerTable table;
  table.reps = c.reps;
  table.seed = c.seed;
  for (std::size_t n : c.ns) {
    for (const auto& model : models) {
      model.validate();
      const double h_true = model.implied_hurst();
      // Common random numbers: every statistic and Hurst mode sees the same series.
      std::vector<std::vector<double>> series(c.reps);
      parallel_for(c.reps, [&](std::size_t r) {
        Rng rng(derive_seed(c.seed, {kReplicateTag, n, real_tag(h_true), r}));
        series[r] = apply_change(sim::simulate_values(model, n, rng), change);
      });

      std::optional<std::array<std::vector<double>, 4>> known_sample;
      for (auto mode : c.hurst_modes) {
        for (auto kind : c.statistics) {
          calibrate::TestOptions opt;
          opt.kind = kind;
          opt.alpha = c.alpha;
          opt.hurst_source = mode;
          opt.scale_correction = correct;
          opt.reps = c.calib_reps;
          opt.seed = calib_seed;
          opt.cache = &cache;
          calibrate::CriticalValueTable known_table(calib_seed);
          if (mode == calibrate::HurstSource::Known) {
            opt.hurst = h_true;
            if (h_true > 0.5 && h_true < 1.0) {
              if (!known_sample) known_sample = calibrate::null_raw_sample(n, h_true, c.calib_reps, calib_seed);
              const auto& col = (*known_sample)[static_cast<std::size_t>(kind)];
              known_table.insert({kind, n, h_true, c.alpha, c.calib_reps, calibrate::empirical_quantile(col, c.alpha)});
              opt.table = &known_table;
            }
          } else {
            // Warm the grid points every replicate will need, so the decision
            // loop below only reads the cache.
            std::vector<double> hs(c.reps, nan);
            parallel_for(c.reps, [&](std::size_t r) {
              try {
                hs[r] = mode == calibrate::HurstSource::Whittle ? estimators::local_whittle(series[r]).value
                                                                : estimators::split_whittle(series[r], kind).value;
              } catch (const Error&) {
              }
            });
            std::set<std::size_t> needed;
            for (double h : hs) {
              if (std::isnan(h)) continue;
              const auto [lo, hi] = calibrate::NullDistributionCache::bracket(h);
              needed.insert(lo);
              needed.insert(hi);
            }
            for (auto idx : needed) cache.ensure(n, idx);
          }

          std::vector<int> decision(c.reps, -1);
          parallel_for(c.reps, [&](std::size_t r) {
            try {
              decision[r] = calibrate::perform_test(series[r], opt).reject ? 1 : 0;
            } catch (const Error&) {
              decision[r] = -1;
            }
          });
          std::size_t ok = 0;
          std::size_t hits = 0;
          for (int dcs : decision) {
            if (dcs < 0) continue;
            ++ok;
            hits += static_cast<std::size_t>(dcs);
          }
          PowerRow row{c.scenario, kind, mode, n, h_true,
                       ok ? static_cast<double>(hits) / static_cast<double>(ok) : nan, ok, c.reps - ok};
          table.rows.push_back(row);
        }
      }
    }
  }
  return table;
}

std::string power_table_csv(const PowerTable& table) {
  std::string out = "scenario,stat,hurst_mode,n,H,rate,reps\n";
  char buf[256];
  for (const auto& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%zu,%.6g,%.6g,%zu\n", r.scenario.c_str(), stats::to_string(r.kind).c_str(),
                  calibrate::to_string(r.hurst_mode).c_str(), r.n, r.hurst, r.rate, r.reps);
    out += buf;
  }
  return out;
}

}  // namespace lrdcp::experiments
