/* Exercises the C API from C: handles, error codes, generators, solve. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "bdiv.h"

static int failures = 0;

#define EXPECT(cond)                                                \
  do {                                                              \
    if (!(cond)) {                                                  \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                   \
    }                                                               \
  } while (0)

static void test_field_roundtrip(const char* dir) {
  size_t n[2] = {3, 4};
  double lo[2] = {0.0, -1.0}, hi[2] = {1.0, 1.0};
  int per[2] = {0, 1};
  bdiv_field* f = NULL;
  EXPECT(bdiv_field_create(2, n, lo, hi, per, &f) == BDIV_OK);
  EXPECT(bdiv_field_dim(f) == 2);
  EXPECT(bdiv_field_size(f) == 12);
  double* v = bdiv_field_data(f);
  for (size_t k = 0; k < 12; ++k) v[k] = (double)k / 7.0 - 0.5;

  char path[512];
  snprintf(path, sizeof path, "%s/capi_roundtrip.bdiv", dir);
  EXPECT(bdiv_field_write(f, path) == BDIV_OK);
  bdiv_field* g = NULL;
  EXPECT(bdiv_field_read(path, &g) == BDIV_OK);
  EXPECT(memcmp(bdiv_field_cdata(f), bdiv_field_cdata(g), 12 * sizeof(double)) == 0);
  size_t gn[3];
  double glo[3], ghi[3];
  int gper[3];
  EXPECT(bdiv_field_grid(g, gn, glo, ghi, gper) == BDIV_OK);
  EXPECT(gn[0] == 3 && gn[1] == 4 && glo[1] == -1.0 && ghi[0] == 1.0 && gper[0] == 0 && gper[1] == 1);

  double l2 = 0.0, ref = 0.0;
  EXPECT(bdiv_norm(f, "L2", &l2) == BDIV_OK);
  for (size_t k = 0; k < 12; ++k) ref += v[k] * v[k] * (1.0 / 3.0) * (2.0 / 4.0);
  EXPECT(fabs(l2 - sqrt(ref)) < 1e-14);
  EXPECT(bdiv_norm(f, "L(2,2)", &l2) == BDIV_OK);
  EXPECT(fabs(l2 - sqrt(ref)) < 1e-13);
  EXPECT(bdiv_norm(f, "nonsense", &l2) == BDIV_ERR_INVALID);
  EXPECT(strstr(bdiv_last_error(), "nonsense") != NULL);

  bdiv_field_free(f);
  bdiv_field_free(g);
}

static void test_errors(void) {
  bdiv_field* f = NULL;
  EXPECT(bdiv_field_read("/nonexistent/file.bdiv", &f) == BDIV_ERR_IO);
  EXPECT(f == NULL);
  EXPECT(bdiv_field_read(NULL, &f) == BDIV_ERR_NULL);
  size_t n[1] = {1};
  double lo[1] = {0}, hi[1] = {1};
  int per[1] = {0};
  EXPECT(bdiv_field_create(1, n, lo, hi, per, &f) == BDIV_ERR_INVALID);
  EXPECT(bdiv_gen_nirenberg(4, &f) == BDIV_ERR_INVALID);
  bdiv_field_free(NULL);
  bdiv_string_free(NULL);
  EXPECT(strlen(bdiv_version()) > 0);
}

static void test_solve_onestep(void) {
  bdiv_field* f = NULL;
  EXPECT(bdiv_gen_ball(2.0, 1.0, 32, 2.0, 0, &f) == BDIV_OK);
  bdiv_solve_options o;
  bdiv_solve_options_init(&o);
  EXPECT(strcmp(o.method, "onestep2d") == 0);
  bdiv_solution* s = NULL;
  EXPECT(bdiv_solve(f, &o, &s) == BDIV_OK);
  EXPECT(bdiv_solution_converged(s) == 1);
  EXPECT(bdiv_solution_verified(s) == 1);
  EXPECT(bdiv_solution_part_count(s) == 2);

  bdiv_vector* u = NULL;
  EXPECT(bdiv_solution_u(s, &u) == BDIV_OK);
  EXPECT(bdiv_vector_dim(u) == 2);
  bdiv_field* div = NULL;
  EXPECT(bdiv_vector_divergence(u, &div) == BDIV_OK);
  const double* a = bdiv_field_cdata(div);
  const double* b = bdiv_field_cdata(f);
  double err = 0.0;
  for (size_t k = 0; k < bdiv_field_size(f); ++k) err = fmax(err, fabs(a[k] - b[k]));
  EXPECT(err < 1e-12);
  double l2 = 0.0;
  EXPECT(bdiv_norm(f, "L2", &l2) == BDIV_OK);
  EXPECT(bdiv_vector_max_abs(u, 0) <= l2 * (1 + 1e-12));
  EXPECT(bdiv_vector_max_abs(u, 1) <= l2 * (1 + 1e-12));

  char* json = NULL;
  EXPECT(bdiv_solution_report_json(s, &json) == BDIV_OK);
  EXPECT(strstr(json, "\"verification\"") != NULL);
  bdiv_string_free(json);
  char* csv = NULL;
  EXPECT(bdiv_solution_certificates_csv(s, &csv) == BDIV_OK);
  EXPECT(strncmp(csv, "axis,index,value,bound\n", 23) == 0);
  bdiv_string_free(csv);

  o.method = "no-such-method";
  bdiv_solution* bad = NULL;
  EXPECT(bdiv_solve(f, &o, &bad) == BDIV_ERR_INVALID);
  EXPECT(bad == NULL);

  bdiv_field_free(div);
  bdiv_vector_free(u);
  bdiv_solution_free(s);
  bdiv_field_free(f);
}

static void test_solve_helmholtz(void) {
  bdiv_field* raw = NULL;
  EXPECT(bdiv_gen_random(3, 16, BDIV_LAW_GAUSSIAN, 0, 0.0, &raw) == BDIV_OK);
  bdiv_field* f = NULL;
  EXPECT(bdiv_field_mean_zero(raw, &f) == BDIV_OK);
  double mass = 1.0;
  EXPECT(bdiv_field_integral(f, &mass) == BDIV_OK);
  EXPECT(fabs(mass) < 1e-14);
  bdiv_solve_options o;
  bdiv_solve_options_init(&o);
  o.method = "helmholtz";
  bdiv_solution* s = NULL;
  EXPECT(bdiv_solve(f, &o, &s) == BDIV_OK);
  EXPECT(bdiv_solution_verified(s) == 1);
  bdiv_field* r = NULL;
  EXPECT(bdiv_solution_residual(s, &r) == BDIV_OK);
  double rmax = 1.0;
  EXPECT(bdiv_norm(r, "Linf", &rmax) == BDIV_OK);
  EXPECT(rmax < 1e-12);

  bdiv_field* like = NULL;
  EXPECT(bdiv_gen_random_like(4, f, BDIV_LAW_SPIKES, 5, 3.0, &like) == BDIV_OK);
  EXPECT(bdiv_field_size(like) == bdiv_field_size(f));

  bdiv_field_free(like);
  bdiv_field_free(r);
  bdiv_solution_free(s);
  bdiv_field_free(f);
  bdiv_field_free(raw);
}

static void test_verify(void) {
  int passed = 0;
  char* json = NULL;
  EXPECT(bdiv_verify("fields", NULL, 0, &passed, &json) == BDIV_OK);
  EXPECT(passed == 1);
  EXPECT(strstr(json, "fields.adjointness") != NULL);
  bdiv_string_free(json);
  EXPECT(bdiv_verify("bogus", NULL, 0, &passed, &json) == BDIV_ERR_INVALID);
}

int main(int argc, char** argv) {
  const char* dir = argc > 1 ? argv[1] : ".";
  test_field_roundtrip(dir);
  test_errors();
  test_solve_onestep();
  test_solve_helmholtz();
  test_verify();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("all C API checks passed\n");
  return 0;
}
