#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "lrdcp/lrdcp.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

#define EXPECT_OK(call)                                                            \
  do {                                                                             \
    lrdcp_status s_ = (call);                                                      \
    if (s_ != LRDCP_OK) {                                                          \
      fprintf(stderr, "%s:%d: %s -> %d (%s)\n", __FILE__, __LINE__, #call, (int)s_, \
              lrdcp_last_error());                                                 \
      ++failures;                                                                  \
    }                                                                              \
  } while (0)

static void test_errors(void) {
  lrdcp_series* s = NULL;
  EXPECT(lrdcp_series_create(NULL, 5, &s) == LRDCP_ERR_INVALID_ARG);
  EXPECT(strlen(lrdcp_last_error()) > 0);
  double one = 1.0;
  EXPECT(lrdcp_series_create(&one, 1, &s) == LRDCP_ERR_DOMAIN);
  double bad[3] = {1.0, NAN, 2.0};
  EXPECT(lrdcp_series_create(bad, 3, &s) == LRDCP_ERR_DOMAIN);
  lrdcp_stat st;
  EXPECT(lrdcp_stat_from_name("ad", &st) == LRDCP_ERR_DOMAIN);
  EXPECT_OK(lrdcp_stat_from_name("wilcoxon", &st));
  EXPECT(st == LRDCP_STAT_WILCOXON);
  lrdcp_model m = {LRDCP_MODEL_FGN, 1.2, 0.0, 0.0};
  EXPECT(lrdcp_simulate(&m, 100, 1, 0, &s) == LRDCP_ERR_DOMAIN);
  EXPECT(lrdcp_series_read_csv("/nonexistent/input.csv", &s) == LRDCP_ERR_IO);
  EXPECT(lrdcp_version() != NULL);
}

static void test_series_and_statistics(void) {
  double y[6] = {0.0, 0.1, -0.2, 3.0, 3.1, 2.9};
  lrdcp_series* s = NULL;
  EXPECT_OK(lrdcp_series_create(y, 6, &s));
  EXPECT(lrdcp_series_length(s) == 6);
  EXPECT(lrdcp_series_data(s)[3] == 3.0);
  double raw = 0;
  size_t k = 0;
  EXPECT_OK(lrdcp_statistic(s, LRDCP_STAT_CUSUM, &raw, &k));
  EXPECT(k == 3);
  EXPECT(fabs(raw - fabs(-0.1 - 0.5 * 8.9)) < 1e-12);
  EXPECT(lrdcp_statistic(NULL, LRDCP_STAT_KS, &raw, &k) == LRDCP_ERR_INVALID_ARG);
  lrdcp_series_destroy(s);
}

static void test_simulation(void) {
  lrdcp_model m = {LRDCP_MODEL_FGN, 0.75, 0.0, 0.0};
  lrdcp_series *a = NULL, *b = NULL, *c = NULL;
  EXPECT_OK(lrdcp_simulate(&m, 256, 42, 3, &a));
  EXPECT_OK(lrdcp_simulate(&m, 256, 42, 3, &b));
  EXPECT_OK(lrdcp_simulate(&m, 256, 42, 4, &c));
  EXPECT(memcmp(lrdcp_series_data(a), lrdcp_series_data(b), 256 * sizeof(double)) == 0);
  EXPECT(memcmp(lrdcp_series_data(a), lrdcp_series_data(c), 256 * sizeof(double)) != 0);
  double r1 = 0;
  EXPECT_OK(lrdcp_model_autocov(&m, 1, &r1));
  EXPECT(fabs(r1 - 0.5 * (pow(2.0, 1.5) - 2.0)) < 1e-12);
  double d = 0;
  EXPECT_OK(lrdcp_normalization(512, 1, &m, 1, &d));
  EXPECT(fabs(d - pow(512.0, 0.75)) < 1e-9 * d);
  lrdcp_series_destroy(a);
  lrdcp_series_destroy(b);
  lrdcp_series_destroy(c);
}

static void test_hermite(void) {
  double v = 0;
  EXPECT_OK(lrdcp_hermite_coeff("identity", 1, 0.0, &v));
  EXPECT(fabs(v + 1.0 / sqrt(2.0 * M_PI)) < 1e-8);
  int rank = 0;
  EXPECT_OK(lrdcp_hermite_rank("square", 4, &rank));
  EXPECT(rank == 2);
  char* json = NULL;
  EXPECT_OK(lrdcp_hermite_coeff_json("square", 2, 1.0, &json));
  EXPECT(json != NULL && strstr(json, "\"method\"") != NULL);
  lrdcp_string_free(json);
  EXPECT(lrdcp_hermite_coeff("cube", 1, 0.0, &v) != LRDCP_OK);
}

static void test_tables(const char* dir) {
  lrdcp_table* t = NULL;
  EXPECT_OK(lrdcp_table_create(7, &t));
  const double alphas[2] = {0.05, 0.1};
  EXPECT_OK(lrdcp_table_calibrate(t, LRDCP_STAT_CVM, 80, 0.7, alphas, 2, 200, 7));
  size_t count = 0;
  EXPECT_OK(lrdcp_table_size(t, &count));
  EXPECT(count == 2);
  double q05 = 0, q10 = 0;
  EXPECT_OK(lrdcp_table_lookup(t, LRDCP_STAT_CVM, 80, 0.7, 0.05, &q05));
  EXPECT_OK(lrdcp_table_lookup(t, LRDCP_STAT_CVM, 80, 0.7, 0.1, &q10));
  EXPECT(q05 >= q10);
  EXPECT(lrdcp_table_lookup(t, LRDCP_STAT_KS, 80, 0.7, 0.05, &q05) == LRDCP_ERR_DOMAIN);
  EXPECT(lrdcp_table_calibrate(t, LRDCP_STAT_CVM, 80, 0.7, alphas, 2, 50, 7) == LRDCP_ERR_DOMAIN);

  char path[4096];
  snprintf(path, sizeof path, "%s/capi_table.json", dir);
  EXPECT_OK(lrdcp_table_set_created(t, "2024-01-01T00:00:00Z"));
  EXPECT_OK(lrdcp_table_save(t, path));
  lrdcp_table* u = NULL;
  EXPECT_OK(lrdcp_table_load(path, &u));
  double again = 0;
  EXPECT_OK(lrdcp_table_lookup(u, LRDCP_STAT_CVM, 80, 0.7, 0.1, &again));
  EXPECT(again == q10);
  lrdcp_table_destroy(u);
  remove(path);

  lrdcp_model m = {LRDCP_MODEL_FGN, 0.7, 0.0, 0.0};
  lrdcp_series* s = NULL;
  EXPECT_OK(lrdcp_simulate(&m, 80, 9, 0, &s));
  lrdcp_test_options o;
  lrdcp_test_options_init(&o);
  EXPECT(o.alpha == 0.05);
  o.stat = LRDCP_STAT_CVM;
  o.hurst_mode = "known";
  o.hurst = 0.7;
  o.reps = 200;
  o.seed = 7;
  char* json = NULL;
  EXPECT_OK(lrdcp_run_test(s, &o, t, &json));
  EXPECT(json != NULL && strstr(json, "\"reject\"") != NULL);
  lrdcp_string_free(json);
  json = NULL;
  o.hurst = 0.3;
  EXPECT(lrdcp_run_test(s, &o, t, &json) == LRDCP_ERR_DOMAIN);
  EXPECT(json == NULL);
  EXPECT(lrdcp_run_test(s, NULL, t, &json) == LRDCP_ERR_INVALID_ARG);
  lrdcp_series_destroy(s);
  lrdcp_table_destroy(t);
}

static void test_are(void) {
  double r = 0, f = 0, are = 0;
  EXPECT_OK(lrdcp_gaussian_ratio(&r));
  EXPECT(fabs(r - 1.0 / 3.0) < 1e-8);
  EXPECT_OK(lrdcp_fstar(0.8, 0.0, 1.2, 0.5, 0.1, 0.9, &f));
  EXPECT(f == 0.8);
  EXPECT_OK(lrdcp_are_mean_variance(1.0, 1.0, 1.2, 0.5, 0.1, 0.9, 0.7, &are));
  EXPECT(are > 1.0);
  EXPECT(lrdcp_fstar(1.0, 1.0, 1.2, 0.5, 0.9, 0.1, &f) == LRDCP_ERR_DOMAIN);
}

static void test_power(void) {
  const char* config = "scenario=meanshift\nstat=cusum\nn=60\nH=0.7\nreps=100\nJ=100\n";
  lrdcp_power_overrides o = {5, 1, 0, 0};
  char *csv = NULL, *resolved = NULL, *csv2 = NULL;
  EXPECT_OK(lrdcp_power_study(config, &o, &csv, &resolved));
  EXPECT_OK(lrdcp_power_study(config, &o, &csv2, NULL));
  EXPECT(csv && csv2 && strcmp(csv, csv2) == 0);
  EXPECT(csv && strncmp(csv, "scenario,stat,hurst_mode,n,H,rate,reps\n", 39) == 0);
  EXPECT(resolved && strstr(resolved, "seed=5") != NULL);
  lrdcp_string_free(csv);
  lrdcp_string_free(csv2);
  lrdcp_string_free(resolved);
  EXPECT(lrdcp_power_study("n=60\nfoo=1\n", NULL, &csv, NULL) == LRDCP_ERR_PARSE);
  EXPECT(strstr(lrdcp_last_error(), "2") != NULL);
}

int main(int argc, char** argv) {
  const char* dir = argc > 1 ? argv[1] : ".";
  test_errors();
  test_series_and_statistics();
  test_simulation();
  test_hermite();
  test_tables(dir);
  test_are();
  test_power();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("all C interface checks passed\n");
  return 0;
}
