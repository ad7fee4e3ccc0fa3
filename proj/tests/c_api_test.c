/* Copyright 2026 The uavee Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License. */

/* Exercises the shared library through its C header only, compiled as C. */

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "uavee/uavee.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expected %s (%s)\n", __FILE__, __LINE__, \
              #cond, uavee_last_error());                              \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

static void count_rows(const uavee_metrics_row* row, void* user) {
  (void)row;
  ++*(int*)user;
}

static void count_checks(const char* name, int passed, const char* detail, void* user) {
  (void)name;
  (void)detail;
  if (passed) ++*(int*)user;
}

static void test_config(void) {
  uavee_config* c = NULL;
  char buf[64];
  size_t needed = 0;
  EXPECT(uavee_config_create(&c) == UAVEE_OK);
  EXPECT(uavee_config_get(c, "r_inc", buf, sizeof buf, &needed) == UAVEE_OK);
  EXPECT(strcmp(buf, "10") == 0);
  EXPECT(needed == 2);
  EXPECT(uavee_config_get(c, "r_inc", buf, 2, &needed) == UAVEE_ERR_BUFFER_TOO_SMALL);
  EXPECT(needed == 2);
  EXPECT(uavee_config_get(c, "nope", buf, sizeof buf, &needed) == UAVEE_ERR_PARSE);

  EXPECT(uavee_config_set(c, "r_min", "2000") == UAVEE_ERR_OUT_OF_RANGE);
  EXPECT(strstr(uavee_last_error(), "r_min") != NULL);
  EXPECT(uavee_config_get(c, "r_min", buf, sizeof buf, &needed) == UAVEE_OK);
  EXPECT(strcmp(buf, "50") == 0);
  EXPECT(uavee_config_set(c, "steps_per_episode", "6") == UAVEE_OK);

  EXPECT(uavee_config_serialize(c, NULL, 0, &needed) == UAVEE_ERR_BUFFER_TOO_SMALL);
  char* text = malloc(needed + 1);
  EXPECT(uavee_config_serialize(c, text, needed + 1, &needed) == UAVEE_OK);
  uavee_config* back = NULL;
  EXPECT(uavee_config_parse(text, &back) == UAVEE_OK);
  EXPECT(uavee_config_get(back, "steps_per_episode", buf, sizeof buf, &needed) == UAVEE_OK);
  EXPECT(strcmp(buf, "6") == 0);
  free(text);

  uavee_config* bad = NULL;
  EXPECT(uavee_config_parse("r_min=2000\n", &bad) == UAVEE_ERR_OUT_OF_RANGE);
  EXPECT(bad == NULL);
  EXPECT(uavee_config_load("/nonexistent/x.cfg", &bad) == UAVEE_ERR_IO);
  EXPECT(uavee_config_create(NULL) == UAVEE_ERR_INVALID_ARGUMENT);

  uavee_config_destroy(back);
  uavee_config_destroy(c);
  uavee_config_destroy(NULL);
}

static void test_names(void) {
  uavee_policy p;
  EXPECT(uavee_policy_from_name("energy-saving", &p) == UAVEE_OK);
  EXPECT(p == UAVEE_POLICY_ENERGY_SAVING);
  EXPECT(strcmp(uavee_policy_name(UAVEE_POLICY_DDQN), "ddqn") == 0);
  EXPECT(uavee_policy_from_name("greedy", &p) == UAVEE_ERR_PARSE);
  EXPECT(strcmp(uavee_status_name(UAVEE_ERR_DOMAIN), "domain error") == 0);
  EXPECT(strlen(uavee_version()) > 0);
}

static void test_experiment(void) {
  uavee_config* c = NULL;
  uavee_experiment* ex = NULL;
  const int32_t fleets[] = {2, 3};
  const uint64_t seeds[] = {7};
  int rows_seen = 0;
  uavee_metrics_row row;

  EXPECT(uavee_config_create(&c) == UAVEE_OK);
  EXPECT(uavee_config_set(c, "steps_per_episode", "10") == UAVEE_OK);
  EXPECT(uavee_experiment_create(c, &ex) == UAVEE_OK);
  uavee_config_destroy(c); /* the experiment keeps its own copy */
  EXPECT(uavee_experiment_set_callback(ex, count_rows, &rows_seen) == UAVEE_OK);
  EXPECT(uavee_experiment_run(ex, UAVEE_POLICY_MIN_RADIUS, fleets, 2, seeds, 1, 2) ==
         UAVEE_OK);
  EXPECT(rows_seen == 4);
  EXPECT(uavee_experiment_row_count(ex) == 4);
  EXPECT(uavee_experiment_row(ex, 3, &row) == UAVEE_OK);
  EXPECT(row.fleet_size == 3);
  EXPECT(row.episode == 1);
  EXPECT(row.seed == 7);
  EXPECT(row.policy == UAVEE_POLICY_MIN_RADIUS);
  EXPECT(row.norm_ee == 1.0);
  EXPECT(uavee_experiment_row(ex, 4, &row) == UAVEE_ERR_OUT_OF_RANGE);
  EXPECT(uavee_experiment_run(ex, UAVEE_POLICY_HOVER, fleets, 2, seeds, 1, -1) ==
         UAVEE_ERR_INVALID_ARGUMENT);
  EXPECT(uavee_experiment_run(ex, (uavee_policy)42, fleets, 2, seeds, 1, 1) ==
         UAVEE_ERR_INVALID_ARGUMENT);

  size_t written = 99;
  EXPECT(uavee_experiment_save_checkpoints(ex, ".", &written) == UAVEE_OK);
  EXPECT(written == 0);
  EXPECT(uavee_experiment_write(ex, "/nonexistent/dir/m.csv", NULL, NULL, "x") ==
         UAVEE_ERR_IO);
  uavee_experiment_destroy(ex);
}

static void test_verify(void) {
  int passed = 0, failed = -1;
  EXPECT(uavee_verify(count_checks, &passed, &failed) == UAVEE_OK);
  EXPECT(failed == 0);
  EXPECT(passed > 0);
}

int main(void) {
  test_names();
  test_config();
  test_experiment();
  test_verify();
  if (failures) fprintf(stderr, "%d expectation(s) failed\n", failures);
  else printf("c api: all expectations met\n");
  return failures ? 1 : 0;
}
