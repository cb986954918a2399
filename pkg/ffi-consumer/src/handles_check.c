/*
 * Handle-semantics check from C: free is idempotent-unsafe by contract
 * (second free reports BAD_HANDLE), zero is never valid, and the
 * per-thread error message survives the failure.
 *
 *   handles_check MODEL_PACKAGE_DIR
 */

#include <stdint.h>
#include <stdio.h>
#include <string.h>

#include "odr_centroid.h"

static int fail(const char *what) {
  fprintf(stderr, "handles_check failed: %s\n", what);
  return 1;
}

int main(int argc, char **argv) {
  if (argc != 2) {
    fprintf(stderr, "usage: %s MODEL_PACKAGE_DIR\n", argv[0]);
    return 64;
  }

  uint64_t handle = 0;
  if (odr_load_centroid(argv[1], &handle) != ODR_OK || handle == 0)
    return fail("load");

  if (odr_free(handle) != ODR_OK) return fail("first free");
  if (odr_free(handle) != ODR_BAD_HANDLE) return fail("double free code");

  char msg[256];
  if (odr_last_error(msg, sizeof msg) != ODR_OK || msg[0] == '\0')
    return fail("last_error after double free");

  if (odr_free(0) != ODR_BAD_HANDLE) return fail("zero handle");

  uint64_t again = 0;
  if (odr_load_centroid(argv[1], &again) != ODR_OK) return fail("reload");
  if (again == handle) return fail("handle reuse");
  if (odr_free(again) != ODR_OK) return fail("reload free");

  puts("handles_check ok");
  return 0;
}
