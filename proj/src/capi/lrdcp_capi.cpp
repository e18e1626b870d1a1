#include "lrdcp/lrdcp.h"

#include <cstring>
#include <memory>
#include <string>

#include "json.hpp"
#include "lrdcp/calibrate.hpp"
#include "lrdcp/error.hpp"
#include "lrdcp/estimators.hpp"
#include "lrdcp/experiments.hpp"
#include "lrdcp/io.hpp"

struct lrdcp_series {
  lrdcp::sim::TimeSeries series;
};

struct lrdcp_table {
  lrdcp::calibrate::CriticalValueTable table;
};

namespace {

thread_local std::string t_last_error;

lrdcp_status fail(lrdcp_status status, const std::string& message) {
  t_last_error = message;
  return status;
}

// Runs body and maps exceptions to status codes.
template <class Fn>
lrdcp_status guarded(Fn&& body) {
  try {
    t_last_error.clear();
    body();
    return LRDCP_OK;
  } catch (const lrdcp::ParseError& e) {
    return fail(LRDCP_ERR_PARSE, e.what());
  } catch (const lrdcp::DomainError& e) {
    return fail(LRDCP_ERR_DOMAIN, e.what());
  } catch (const lrdcp::NumericError& e) {
    return fail(LRDCP_ERR_NUMERIC, e.what());
  } catch (const lrdcp::IoError& e) {
    return fail(LRDCP_ERR_IO, e.what());
  } catch (const lrdcp::Error& e) {
    return fail(LRDCP_ERR_INTERNAL, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(LRDCP_ERR_INVALID_ARG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LRDCP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LRDCP_ERR_INTERNAL, e.what());
  }
}

void require(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string("null argument: ") + what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

lrdcp::sim::GaussianModel to_model(const lrdcp_model* m) {
  require(m, "model");
  lrdcp::sim::GaussianModel out;
  switch (m->kind) {
    case LRDCP_MODEL_FGN: out = lrdcp::sim::GaussianModel::fgn(m->hurst); break;
    case LRDCP_MODEL_FARIMA00: out = lrdcp::sim::GaussianModel::farima00(m->d); break;
    case LRDCP_MODEL_FARIMA10: out = lrdcp::sim::GaussianModel::farima10(m->d, m->a1); break;
    case LRDCP_MODEL_AR1: out = lrdcp::sim::GaussianModel::ar1(m->a1); break;
    default: throw std::invalid_argument("unknown model kind");
  }
  return out;
}

lrdcp::stats::StatisticKind to_stat(lrdcp_stat s) {
  if (s < LRDCP_STAT_KS || s > LRDCP_STAT_WILCOXON) throw std::invalid_argument("unknown statistic");
  return static_cast<lrdcp::stats::StatisticKind>(s);
}

}  // namespace

extern "C" {

const char* lrdcp_version(void) { return "1.0.0"; }

const char* lrdcp_last_error(void) { return t_last_error.c_str(); }

void lrdcp_string_free(char* text) { std::free(text); }

lrdcp_status lrdcp_write_text_atomic(const char* path, const char* text) {
  return guarded([&] {
    require(path, "path");
    require(text, "text");
    lrdcp::io::write_file_atomic(path, text);
  });
}

void lrdcp_set_threads(unsigned threads) { lrdcp::set_thread_limit(threads); }

lrdcp_status lrdcp_stat_from_name(const char* name, lrdcp_stat* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = static_cast<lrdcp_stat>(lrdcp::stats::parse_statistic(name));
  });
}

lrdcp_status lrdcp_model_from_name(const char* name, lrdcp_model_kind* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = static_cast<lrdcp_model_kind>(lrdcp::sim::parse_model_kind(name));
  });
}

lrdcp_status lrdcp_series_create(const double* values, size_t n, lrdcp_series** out) {
  return guarded([&] {
    require(values, "values");
    require(out, "out");
    *out = new lrdcp_series{lrdcp::sim::TimeSeries(std::vector<double>(values, values + n))};
  });
}

void lrdcp_series_destroy(lrdcp_series* series) { delete series; }

size_t lrdcp_series_length(const lrdcp_series* series) { return series ? series->series.size() : 0; }

const double* lrdcp_series_data(const lrdcp_series* series) {
  return series ? series->series.values().data() : nullptr;
}

lrdcp_status lrdcp_series_read_csv(const char* path, lrdcp_series** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new lrdcp_series{lrdcp::sim::TimeSeries(lrdcp::io::read_series_csv(path))};
  });
}

lrdcp_status lrdcp_series_write_csv(const lrdcp_series* series, const char* path) {
  return guarded([&] {
    require(series, "series");
    require(path, "path");
    lrdcp::io::write_file_atomic(path, lrdcp::io::format_series_csv(series->series.values()));
  });
}

lrdcp_status lrdcp_simulate(const lrdcp_model* model, size_t n, uint64_t seed, uint64_t replicate, lrdcp_series** out) {
  return guarded([&] {
    require(out, "out");
    *out = new lrdcp_series{lrdcp::sim::simulate(to_model(model), n, {seed, replicate})};
  });
}

lrdcp_status lrdcp_model_autocov(const lrdcp_model* model, long lag, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = lrdcp::sim::model_autocov(to_model(model), lag);
  });
}

lrdcp_status lrdcp_hermite_coeff(const char* transform, int q, double x, double* value) {
  return guarded([&] {
    require(transform, "transform");
    require(value, "value");
    *value = lrdcp::subordinate::hermite_coeff(lrdcp::subordinate::parse_subordinator(transform), q, x).value;
  });
}

lrdcp_status lrdcp_hermite_coeff_json(const char* transform, int q, double x, char** json) {
  return guarded([&] {
    require(transform, "transform");
    require(json, "json");
    const auto c = lrdcp::subordinate::hermite_coeff(lrdcp::subordinate::parse_subordinator(transform), q, x);
    nlohmann::ordered_json j;
    j["q"] = q;
    j["x"] = x;
    j["value"] = c.value;
    j["method"] = c.method;
    *json = dup_string(j.dump(2) + "\n");
  });
}

lrdcp_status lrdcp_hermite_rank(const char* transform, int qmax, int* rank) {
  return guarded([&] {
    require(transform, "transform");
    require(rank, "rank");
    *rank = lrdcp::subordinate::hermite_rank(lrdcp::subordinate::parse_subordinator(transform), qmax).rank;
  });
}

lrdcp_status lrdcp_normalization(size_t n, int m, const lrdcp_model* model, int exact, double* value) {
  return guarded([&] {
    require(value, "value");
    const auto source = exact ? lrdcp::subordinate::NormalizationSource::ExactDoubleSum
                              : lrdcp::subordinate::NormalizationSource::AsymptoticFormula;
    *value = lrdcp::subordinate::normalization_dn(n, m, to_model(model), source).value;
  });
}

lrdcp_status lrdcp_reduction_residual(const lrdcp_model* model, const char* transform, int m, size_t n, size_t reps,
                                      uint64_t seed, double* value) {
  return guarded([&] {
    require(transform, "transform");
    require(value, "value");
    *value = lrdcp::subordinate::reduction_residual(to_model(model), lrdcp::subordinate::parse_subordinator(transform),
                                                    m, n, reps, seed);
  });
}

lrdcp_status lrdcp_statistic(const lrdcp_series* series, lrdcp_stat stat, double* raw, size_t* argmax_k) {
  return guarded([&] {
    require(series, "series");
    const auto r = lrdcp::stats::raw_statistic(to_stat(stat), series->series.values());
    if (raw) *raw = r.raw_value;
    if (argmax_k) *argmax_k = r.argmax_k;
  });
}

lrdcp_status lrdcp_estimate_json(const lrdcp_series* series, const char* method, lrdcp_stat stat, size_t lags,
                                 int mean_correction, char** json) {
  return guarded([&] {
    require(series, "series");
    require(method, "method");
    require(json, "json");
    namespace est = lrdcp::estimators;
    const auto values = series->series.values();
    const auto m = est::parse_hurst_method(method);
    const auto h = m == est::HurstMethod::Whittle ? est::local_whittle(values) : est::split_whittle(values, to_stat(stat));
    est::ScaleOptions so;
    if (lags) so.lags = lags;
    so.mean_correction = mean_correction != 0;
    const auto sc = est::estimate_scale(values, h, so);
    nlohmann::ordered_json j;
    j["hurst"]["value"] = h.value;
    j["hurst"]["raw_value"] = h.raw_value;
    j["hurst"]["method"] = est::to_string(h.method);
    j["hurst"]["bandwidth"] = h.bandwidth;
    if (h.split_k) j["hurst"]["split_k"] = *h.split_k;
    j["hurst"]["fallback"] = h.fallback;
    j["scale"]["C_hat"] = sc.c_hat;
    j["scale"]["K"] = sc.lags;
    j["scale"]["d_hat_n"] = sc.d_hat_n;
    *json = dup_string(j.dump(2) + "\n");
  });
}

lrdcp_status lrdcp_table_create(uint64_t master_seed, lrdcp_table** out) {
  return guarded([&] {
    require(out, "out");
    *out = new lrdcp_table{lrdcp::calibrate::CriticalValueTable(master_seed)};
  });
}

lrdcp_status lrdcp_table_load(const char* path, lrdcp_table** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new lrdcp_table{lrdcp::calibrate::CriticalValueTable::load(path)};
  });
}

lrdcp_status lrdcp_table_save(const lrdcp_table* table, const char* path) {
  return guarded([&] {
    require(table, "table");
    require(path, "path");
    table->table.save(path);
  });
}

void lrdcp_table_destroy(lrdcp_table* table) { delete table; }

lrdcp_status lrdcp_table_set_created(lrdcp_table* table, const char* stamp) {
  return guarded([&] {
    require(table, "table");
    require(stamp, "stamp");
    table->table.set_created(stamp);
  });
}

lrdcp_status lrdcp_table_calibrate(lrdcp_table* table, lrdcp_stat stat, size_t n, double hurst, const double* alphas,
                                   size_t n_alphas, size_t reps, uint64_t seed) {
  return guarded([&] {
    require(table, "table");
    require(alphas, "alphas");
    const auto entries =
        lrdcp::calibrate::mc_critical_values(to_stat(stat), n, hurst, std::span<const double>(alphas, n_alphas), reps, seed);
    for (const auto& e : entries) table->table.insert(e);
    table->table.set_master_seed(seed);
  });
}

lrdcp_status lrdcp_table_lookup(const lrdcp_table* table, lrdcp_stat stat, size_t n, double hurst, double alpha,
                                double* value) {
  return guarded([&] {
    require(table, "table");
    require(value, "value");
    const auto v = table->table.lookup(to_stat(stat), n, hurst, alpha);
    if (!v) throw lrdcp::DomainError("no table entry for the requested key");
    *value = *v;
  });
}

lrdcp_status lrdcp_table_size(const lrdcp_table* table, size_t* count) {
  return guarded([&] {
    require(table, "table");
    require(count, "count");
    *count = table->table.entries().size();
  });
}

void lrdcp_test_options_init(lrdcp_test_options* o) {
  if (!o) return;
  o->stat = LRDCP_STAT_CVM;
  o->alpha = 0.05;
  o->hurst_mode = "known";
  o->hurst = 0.0;
  o->calibration = "mc";
  o->scale_correction = 0;
  o->reps = 1000;
  o->seed = 1;
  o->limit_grid = 1024;
  o->limit_reps = 2000;
}

lrdcp_status lrdcp_run_test(const lrdcp_series* series, const lrdcp_test_options* o, lrdcp_table* table, char** json) {
  return guarded([&] {
    require(series, "series");
    require(o, "options");
    require(json, "json");
    namespace cal = lrdcp::calibrate;
    cal::TestOptions opt;
    opt.kind = to_stat(o->stat);
    opt.alpha = o->alpha;
    opt.hurst_source = cal::parse_hurst_source(o->hurst_mode ? o->hurst_mode : "known");
    if (opt.hurst_source == cal::HurstSource::Known) opt.hurst = o->hurst;
    opt.calibration = cal::parse_calibration_mode(o->calibration ? o->calibration : "mc");
    opt.scale_correction = o->scale_correction != 0;
    opt.reps = o->reps;
    opt.seed = o->seed;
    opt.limit_grid = o->limit_grid;
    opt.limit_reps = o->limit_reps;
    const std::size_t n = series->series.size();
    if (table && opt.calibration == cal::CalibrationMode::MonteCarlo && opt.hurst_source == cal::HurstSource::Known &&
        !table->table.lookup(opt.kind, n, o->hurst, opt.alpha)) {
      const double a[] = {opt.alpha};
      for (const auto& e : cal::mc_critical_values(opt.kind, n, o->hurst, a, opt.reps, opt.seed)) table->table.insert(e);
    }
    if (table) opt.table = &table->table;
    cal::NullDistributionCache cache(opt.reps, opt.seed);
    opt.cache = &cache;
    *json = dup_string(cal::report_to_json(cal::perform_test(series->series.values(), opt)));
  });
}

lrdcp_status lrdcp_limit_quantile(int m, double hurst, double alpha, size_t grid, size_t reps, uint64_t seed,
                                  double* value) {
  return guarded([&] {
    require(value, "value");
    *value = lrdcp::calibrate::limit_quantile(m, hurst, alpha, grid, reps, seed);
  });
}

lrdcp_status lrdcp_asymptotic_power(double c, double tau, double hurst, double alpha, size_t reps, uint64_t seed,
                                    double* value) {
  return guarded([&] {
    require(value, "value");
    *value = lrdcp::calibrate::asymptotic_power(c, tau, hurst, alpha, reps, seed);
  });
}

lrdcp_status lrdcp_power_study(const char* config_text, const lrdcp_power_overrides* overrides, char** csv,
                               char** resolved) {
  return guarded([&] {
    require(config_text, "config_text");
    require(csv, "csv");
    auto cfg = lrdcp::experiments::parse_power_config(config_text);
    if (overrides) {
      if (overrides->seed_set) cfg.seed = overrides->seed;
      if (overrides->reps) cfg.reps = overrides->reps;
      if (overrides->calib_reps) cfg.calib_reps = overrides->calib_reps;
    }
    const auto table = lrdcp::experiments::run_power_study(cfg);
    *csv = dup_string(lrdcp::experiments::power_table_csv(table));
    if (resolved) *resolved = dup_string(lrdcp::experiments::describe_config(cfg));
  });
}

lrdcp_status lrdcp_fstar(double c1, double c2, double q, double tau, double kappa1, double kappa2, double* value) {
  return guarded([&] {
    require(value, "value");
    *value = lrdcp::experiments::fstar(c1, c2, q, tau, kappa1, kappa2);
  });
}

lrdcp_status lrdcp_are_mean_variance(double c1_star, double c2_star, double q, double tau, double kappa1, double kappa2,
                                     double hurst, double* value) {
  return guarded([&] {
    require(value, "value");
    *value = lrdcp::experiments::are_mean_variance(c1_star, c2_star, q, tau, kappa1, kappa2, hurst);
  });
}

lrdcp_status lrdcp_gaussian_ratio(double* value) {
  return guarded([&] {
    require(value, "value");
    *value = lrdcp::experiments::gaussian_ratio_r();
  });
}

lrdcp_status lrdcp_are_mean_shift_json(double hurst, double tau, double c, double alpha, size_t reps, uint64_t seed,
                                       size_t n, char** json) {
  return guarded([&] {
    require(json, "json");
    const auto r = lrdcp::experiments::are_mean_shift_check(hurst, tau, c, alpha, reps, seed, n);
    nlohmann::ordered_json j;
    j["H"] = hurst;
    j["tau"] = tau;
    j["C"] = c;
    j["alpha"] = alpha;
    j["n"] = r.n;
    j["mu"] = r.mu;
    for (auto kind : lrdcp::stats::kAllStatistics) {
      const auto i = static_cast<std::size_t>(kind);
      j["limit_power"][lrdcp::stats::to_string(kind)] = r.limit_power[i];
      j["finite_power"][lrdcp::stats::to_string(kind)] = r.finite_power[i];
    }
    *json = dup_string(j.dump(2) + "\n");
  });
}

lrdcp_status lrdcp_verify(const char* suite, const size_t* ns, size_t n_ns, size_t reps, uint64_t seed, char** json,
                          int* all_passed) {
  return guarded([&] {
    require(suite, "suite");
    require(json, "json");
    lrdcp::experiments::VerifyOptions vo;
    if (ns) vo.ns.assign(ns, ns + n_ns);
    vo.reps = reps;
    vo.seed = seed;
    const auto results = lrdcp::experiments::run_verify(suite, vo);
    bool ok = true;
    for (const auto& r : results) ok = ok && r.passed;
    if (all_passed) *all_passed = ok ? 1 : 0;
    *json = dup_string(lrdcp::experiments::verify_to_json(results));
  });
}

}  // extern "C"
