/* Minimal consumer of the C API: build a line space, take a norm with its
 * witness, and cross-check against the enumeration oracle.
 *
 * Build (from the repository root, after `cargo build -p graev-ffi`):
 *   cc crates/graev-ffi/examples_c/demo.c \
 *      -Icrates/graev-ffi/include \
 *      target/debug/libgraev_ffi.a -lpthread -ldl -lm -o graev_demo
 */

#include <stdio.h>
#include <stdint.h>

#include "graev.h"

int main(void) {
  const char *json =
      "{\"kind\":\"euclidean\",\"labels\":[\"e\",\"a\",\"b\",\"c\"],"
      "\"coords\":[[0],[1],[2],[4]]}";

  GraevSpace *space = NULL;
  GraevStatus status = graev_space_parse_json(json, &space);
  if (status != GRAEV_STATUS_OK) {
    fprintf(stderr, "parse failed: %s\n", graev_status_message(status));
    return 1;
  }

  const uint32_t support[] = {1, 2, 3};
  double value = 0.0;
  char *witness = NULL;
  status = graev_norm_witness_json(space, support, 3, 0, &value, &witness);
  if (status != GRAEV_STATUS_OK) {
    fprintf(stderr, "norm failed: %s\n", graev_status_message(status));
    graev_space_free(space);
    return 1;
  }

  double oracle = 0.0;
  status = graev_oracle_norm(space, support, 3, 4, &oracle);
  if (status != GRAEV_STATUS_OK) {
    fprintf(stderr, "oracle failed: %s\n", graev_status_message(status));
    graev_string_free(witness);
    graev_space_free(space);
    return 1;
  }

  printf("norm = %g, witness = %s, oracle = %g\n", value, witness, oracle);
  int ok = value == oracle;

  graev_string_free(witness);
  graev_space_free(space);
  return ok ? 0 : 1;
}
