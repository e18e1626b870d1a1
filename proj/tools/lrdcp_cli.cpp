// lrdcp command-line front end. Talks to the library only through lrdcp.h.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lrdcp/lrdcp.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Carries a library status out of a subcommand handler.
struct LibraryFailure {
  lrdcp_status status;
  std::string message;
};

void check(lrdcp_status status) {
  if (status != LRDCP_OK) throw LibraryFailure{status, lrdcp_last_error()};
}

// Owns a char* returned by the library.
class Text {
 public:
  Text() = default;
  Text(const Text&) = delete;
  Text& operator=(const Text&) = delete;
  ~Text() { lrdcp_string_free(ptr_); }
  char** out() { return &ptr_; }
  std::string str() const { return ptr_ ? ptr_ : ""; }

 private:
  char* ptr_ = nullptr;
};

struct SeriesHandle {
  lrdcp_series* ptr = nullptr;
  ~SeriesHandle() { lrdcp_series_destroy(ptr); }
};

struct TableHandle {
  lrdcp_table* ptr = nullptr;
  ~TableHandle() { lrdcp_table_destroy(ptr); }
};

std::uint64_t resolve_seed(std::uint64_t seed) {
  if (seed != 0) return seed;
  std::random_device rd;
  std::uint64_t s = 0;
  while (s == 0) s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  return s;
}

void echo_config(const std::string& line) { std::cerr << "lrdcp: config: " << line << "\n"; }

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    check(lrdcp_write_text_atomic(out.c_str(), text.c_str()));
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LibraryFailure{LRDCP_ERR_IO, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

lrdcp_stat parse_stat(const std::string& name) {
  lrdcp_stat s;
  check(lrdcp_stat_from_name(name.c_str(), &s));
  return s;
}

std::vector<double> parse_doubles(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--alpha", "expected a comma separated list of numbers, got '" + list + "'");
    }
  }
  return out;
}

std::string table_path(const std::string& given) {
  const char* dir = std::getenv("LRDCP_TABLE_DIR");
  if (given.empty()) return dir ? (std::filesystem::path(dir) / "cvtable.json").string() : "";
  const std::filesystem::path p(given);
  if (dir && !p.has_parent_path()) return (std::filesystem::path(dir) / p).string();
  return given;
}

// Shortest representation that round-trips.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Change-point tests for long-range dependent time series"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Maximum worker threads (0 = all cores)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a latent Gaussian series");
  std::string model_name = "fgn";
  double hurst = 0.7, d = 0.2, a1 = 0.6;
  std::size_t n = 500;
  std::uint64_t seed = 0;
  std::string out;
  sim->add_option("--model", model_name, "fgn, farima00, farima10 or ar1")->capture_default_str();
  sim->add_option("--hurst", hurst, "Hurst coefficient (fgn)")->capture_default_str();
  sim->add_option("--d", d, "Memory parameter (farima)")->capture_default_str();
  sim->add_option("--a1", a1, "AR coefficient (farima10, ar1)")->capture_default_str();
  sim->add_option("--n", n, "Length")->capture_default_str();
  sim->add_option("--seed", seed, "Seed (0 = from entropy)")->capture_default_str();
  sim->add_option("--out", out, "Output CSV (stdout when omitted)");

  // hermite
  auto* her = app.add_subcommand("hermite", "Hermite coefficient J_q(x) of a transform");
  std::string transform = "identity";
  int q = 1;
  double x = 0.0;
  her->add_option("--transform", transform, "identity, square, abs, meanshift:MU, scale:S, affine:S,MU, "
                                            "affinesquare:A,B,C, splitsquare:APOS,ANEG")
      ->capture_default_str();
  her->add_option("--q", q, "Order")->capture_default_str();
  her->add_option("--x", x, "Level")->capture_default_str();

  // test
  auto* tst = app.add_subcommand("test", "Run a change-point test on a series");
  std::string input, stat_name = "cvm", estimate_hurst, calib = "mc", table;
  double alpha = 0.05;
  std::optional<double> known_hurst;
  std::size_t reps = 1000;
  bool scale_correction = false, fast = false;
  std::size_t limit_grid = 1024, limit_reps = 2000;
  tst->add_option("--input", input, "Series CSV")->required();
  tst->add_option("--stat", stat_name, "ks, cvm, cusum or wilcoxon")->capture_default_str();
  tst->add_option("--alpha", alpha, "Level")->capture_default_str();
  auto* hopt = tst->add_option("--hurst", known_hurst, "Known Hurst coefficient");
  tst->add_option("--estimate-hurst", estimate_hurst, "whittle or split")->excludes(hopt);
  tst->add_option("--calib", calib, "mc or asymptotic")->capture_default_str();
  tst->add_option("--table", table, "Critical value table JSON (created or extended as needed)");
  tst->add_option("--reps", reps, "Monte Carlo replicates J")->capture_default_str();
  tst->add_option("--seed", seed, "Calibration seed (0 = from entropy)")->capture_default_str();
  tst->add_flag("--scale-correction", scale_correction, "Rescale by the estimated tail constant");
  tst->add_option("--limit-grid", limit_grid, "Grid of the limit functional (asymptotic mode)")->capture_default_str();
  tst->add_option("--limit-reps", limit_reps, "Replicates of the limit functional")->capture_default_str();
  tst->add_flag("--fast", fast, "Use J = 300");

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate H and the tail constant");
  std::string method = "whittle";
  std::size_t lags = 0;
  bool plain_autocov = false;
  est->add_option("--input", input, "Series CSV")->required();
  est->add_option("--method", method, "whittle or split")->capture_default_str();
  est->add_option("--stat", stat_name, "Statistic locating the split")->capture_default_str();
  est->add_option("--K", lags, "Lags in the tail-constant estimate (0 = floor(n^{1/3}))");
  est->add_flag("--no-mean-correction", plain_autocov, "Use the plain sample autocovariance");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Monte Carlo critical values");
  std::string alphas = "0.05";
  bool append = false;
  std::string stamp;
  cal->add_option("--stat", stat_name, "ks, cvm, cusum or wilcoxon")->capture_default_str();
  cal->add_option("--n", n, "Series length")->capture_default_str();
  cal->add_option("--hurst", hurst, "Hurst coefficient of the fGn null")->capture_default_str();
  cal->add_option("--alpha", alphas, "Comma separated levels")->capture_default_str();
  cal->add_option("--reps", reps, "Replicates J")->capture_default_str();
  cal->add_option("--seed", seed, "Master seed (0 = from entropy)")->capture_default_str();
  cal->add_option("--out", out, "Table JSON")->required();
  cal->add_flag("--append", append, "Add to an existing table instead of replacing it");
  cal->add_option("--timestamp", stamp, "Creation stamp stored in the table");

  // power
  auto* pow = app.add_subcommand("power", "Empirical size/power study");
  std::string config;
  std::size_t calib_reps = 0;
  std::size_t power_reps = 0;
  pow->add_option("--config", config, "key=value study file")->required();
  pow->add_option("--out", out, "Output CSV (stdout when omitted)");
  auto* pseed = pow->add_option("--seed", seed, "Master seed, overrides the file (0 = from entropy)");
  pow->add_option("--reps", power_reps, "Replicates per cell, overrides the file");
  pow->add_option("--J", calib_reps, "Calibration replicates, overrides the file");
  pow->add_flag("--fast", fast, "reps = 300, J = 300");

  // are
  auto* are = app.add_subcommand("are", "Asymptotic relative efficiency");
  double c1s = 1.0, c2s = 1.0, tau = 0.5, k1 = 0.1, k2 = 0.9, qv = 0.0, c_shift = 2.0;
  bool mean_shift = false;
  std::size_t are_n = 400;
  hurst = 0.7;
  are->add_option("--c1-star", c1s, "Mean component C1*")->capture_default_str();
  are->add_option("--c2-star", c2s, "Variance component C2*")->capture_default_str();
  are->add_option("--tau", tau, "Change fraction")->capture_default_str();
  are->add_option("--kappa1", k1, "Lower end of the t range")->capture_default_str();
  are->add_option("--kappa2", k2, "Upper end of the t range")->capture_default_str();
  are->add_option("--hurst", hurst, "Hurst coefficient")->capture_default_str();
  are->add_option("--q", qv, "Limit quantile (simulated when omitted)");
  are->add_option("--alpha", alpha, "Level for the simulated quantile")->capture_default_str();
  are->add_option("--reps", reps, "Replicates of the limit functional")->capture_default_str();
  are->add_option("--seed", seed, "Seed (0 = from entropy)")->capture_default_str();
  are->add_flag("--mean-shift", mean_shift, "Compare the four tests under a mean shift instead");
  are->add_option("--C", c_shift, "Noncentrality of the mean shift")->capture_default_str();
  are->add_option("--n", are_n, "Finite sample size for --mean-shift")->capture_default_str();

  // verify
  auto* ver = app.add_subcommand("verify", "Run invariant suites");
  std::string suite = "all", ns_list;
  std::size_t verify_reps = 0;
  std::uint64_t verify_seed = 1;
  ver->add_option("--suite", suite, "sim, hermite, stats, estimators, reduction, calibrate, are or all")
      ->capture_default_str();
  ver->add_option("--n", ns_list, "Comma separated lengths");
  ver->add_option("--reps", verify_reps, "Replicates (0 = suite default)");
  ver->add_option("--seed", verify_seed, "Seed")->capture_default_str();
  ver->add_option("--out", out, "Output JSON (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "lrdcp: usage error: " << e.what() << "\n\n";
    const auto parsed = app.get_subcommands();
    std::cerr << (parsed.empty() ? app.help() : parsed.front()->help());
    return kExitUsage;
  }
  lrdcp_set_threads(threads);

  try {
    if (sim->parsed()) {
      lrdcp_model model{};
      check(lrdcp_model_from_name(model_name.c_str(), &model.kind));
      model.hurst = hurst;
      model.d = d;
      model.a1 = a1;
      seed = resolve_seed(seed);
      echo_config("simulate model=" + model_name + " hurst=" + fmt(hurst) + " d=" + fmt(d) + " a1=" + fmt(a1) +
                  " n=" + std::to_string(n) + " seed=" + std::to_string(seed));
      SeriesHandle s;
      check(lrdcp_simulate(&model, n, seed, 0, &s.ptr));
      if (out.empty()) {
        const double* v = lrdcp_series_data(s.ptr);
        for (std::size_t i = 0; i < lrdcp_series_length(s.ptr); ++i) std::printf("%.17g\n", v[i]);
      } else {
        check(lrdcp_series_write_csv(s.ptr, out.c_str()));
      }
    } else if (her->parsed()) {
      Text json;
      check(lrdcp_hermite_coeff_json(transform.c_str(), q, x, json.out()));
      std::cout << json.str();
    } else if (tst->parsed()) {
      SeriesHandle s;
      check(lrdcp_series_read_csv(input.c_str(), &s.ptr));
      lrdcp_test_options o;
      lrdcp_test_options_init(&o);
      o.stat = parse_stat(stat_name);
      o.alpha = alpha;
      o.calibration = calib.c_str();
      o.scale_correction = scale_correction ? 1 : 0;
      o.reps = fast ? 300 : reps;
      o.seed = resolve_seed(seed);
      o.limit_grid = limit_grid;
      o.limit_reps = limit_reps;
      std::string mode = "known";
      if (known_hurst) {
        o.hurst = *known_hurst;
      } else if (!estimate_hurst.empty()) {
        mode = estimate_hurst;
      } else {
        throw CLI::RequiredError("one of --hurst or --estimate-hurst");
      }
      o.hurst_mode = mode.c_str();
      const std::string tpath = table_path(table);
      TableHandle t;
      if (!tpath.empty()) {
        if (std::filesystem::exists(tpath)) check(lrdcp_table_load(tpath.c_str(), &t.ptr));
        else check(lrdcp_table_create(o.seed, &t.ptr));
      }
      std::size_t before = 0;
      if (t.ptr) check(lrdcp_table_size(t.ptr, &before));
      echo_config("test input=" + input + " stat=" + stat_name + " alpha=" + fmt(alpha) + " hurst_mode=" + mode +
                  (known_hurst ? " hurst=" + fmt(*known_hurst) : "") + " calib=" + calib +
                  " scale_correction=" + (scale_correction ? "on" : "off") + " J=" + std::to_string(o.reps) +
                  " table=" + (tpath.empty() ? "none" : tpath) + " seed=" + std::to_string(o.seed));
      Text json;
      check(lrdcp_run_test(s.ptr, &o, t.ptr, json.out()));
      std::size_t after = before;
      if (t.ptr) check(lrdcp_table_size(t.ptr, &after));
      if (t.ptr && after != before) check(lrdcp_table_save(t.ptr, tpath.c_str()));
      std::cout << json.str();
    } else if (est->parsed()) {
      SeriesHandle s;
      check(lrdcp_series_read_csv(input.c_str(), &s.ptr));
      Text json;
      check(lrdcp_estimate_json(s.ptr, method.c_str(), parse_stat(stat_name), lags, plain_autocov ? 0 : 1, json.out()));
      std::cout << json.str();
    } else if (cal->parsed()) {
      const auto levels = parse_doubles(alphas);
      seed = resolve_seed(seed);
      echo_config("calibrate stat=" + stat_name + " n=" + std::to_string(n) + " hurst=" + fmt(hurst) +
                  " alpha=" + alphas + " reps=" + std::to_string(reps) + " seed=" + std::to_string(seed));
      TableHandle t;
      if (append && std::filesystem::exists(out)) check(lrdcp_table_load(out.c_str(), &t.ptr));
      else check(lrdcp_table_create(seed, &t.ptr));
      check(lrdcp_table_calibrate(t.ptr, parse_stat(stat_name), n, hurst, levels.data(), levels.size(), reps, seed));
      if (!stamp.empty()) check(lrdcp_table_set_created(t.ptr, stamp.c_str()));
      check(lrdcp_table_save(t.ptr, out.c_str()));
    } else if (pow->parsed()) {
      const std::string text = read_text(config);
      lrdcp_power_overrides ov{};
      if (pseed->count() > 0) {
        ov.seed = resolve_seed(seed);
        ov.seed_set = 1;
      }
      ov.reps = fast ? 300 : power_reps;
      ov.calib_reps = fast ? 300 : calib_reps;
      Text csv, resolved;
      check(lrdcp_power_study(text.c_str(), &ov, csv.out(), resolved.out()));
      echo_config("power " + resolved.str());
      emit(csv.str(), out);
    } else if (are->parsed()) {
      seed = resolve_seed(seed);
      if (mean_shift) {
        echo_config("are --mean-shift H=" + fmt(hurst) + " tau=" + fmt(tau) + " C=" + fmt(c_shift) +
                    " alpha=" + fmt(alpha) + " reps=" + std::to_string(reps) + " n=" + std::to_string(are_n) +
                    " seed=" + std::to_string(seed));
        Text json;
        check(lrdcp_are_mean_shift_json(hurst, tau, c_shift, alpha, reps, seed, are_n, json.out()));
        std::cout << json.str();
      } else {
        if (qv <= 0.0) check(lrdcp_limit_quantile(1, hurst, alpha, 1024, reps, seed, &qv));
        echo_config("are c1_star=" + fmt(c1s) + " c2_star=" + fmt(c2s) + " q=" + fmt(qv) + " tau=" + fmt(tau) +
                    " kappa1=" + fmt(k1) + " kappa2=" + fmt(k2) + " H=" + fmt(hurst) + " seed=" + std::to_string(seed));
        double fs = 0.0, ratio = 0.0, r = 0.0;
        check(lrdcp_fstar(c1s, c2s, qv, tau, k1, k2, &fs));
        check(lrdcp_are_mean_variance(c1s, c2s, qv, tau, k1, k2, hurst, &ratio));
        check(lrdcp_gaussian_ratio(&r));
        std::cout << "{\n  \"C1_star\": " << fmt(c1s) << ",\n  \"C2_star\": " << fmt(c2s) << ",\n  \"q\": " << fmt(qv)
                  << ",\n  \"tau\": " << fmt(tau) << ",\n  \"kappa1\": " << fmt(k1) << ",\n  \"kappa2\": " << fmt(k2)
                  << ",\n  \"H\": " << fmt(hurst) << ",\n  \"r\": " << fmt(r) << ",\n  \"fstar\": " << fmt(fs)
                  << ",\n  \"ARE\": " << fmt(ratio) << "\n}\n";
      }
    } else if (ver->parsed()) {
      std::vector<std::size_t> ns;
      for (double v : ns_list.empty() ? std::vector<double>{} : parse_doubles(ns_list))
        ns.push_back(static_cast<std::size_t>(v));
      Text json;
      int all_passed = 0;
      check(lrdcp_verify(suite.c_str(), ns.empty() ? nullptr : ns.data(), ns.size(), verify_reps, verify_seed,
                         json.out(), &all_passed));
      emit(json.str(), out);
      return all_passed ? kExitOk : kExitFailure;
    }
  } catch (const LibraryFailure& f) {
    std::cerr << "lrdcp: error: " << f.message << "\n";
    return f.status == LRDCP_ERR_INVALID_ARG ? kExitUsage : kExitFailure;
  } catch (const CLI::Error& e) {
    std::cerr << "lrdcp: usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}
