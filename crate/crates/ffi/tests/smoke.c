#include <stdio.h>
#include <string.h>

#include "palg.h"

#define CHECK(cond)                                            \
  do {                                                         \
    if (!(cond)) {                                             \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      return 1;                                                \
    }                                                          \
  } while (0)

int main(void) {
  PalgAlgebra *b1 = NULL, *n = NULL, *g = NULL;
  size_t x = 0, map[3];
  bool v = true;
  char *dot = NULL;

  CHECK(palg_algebra_bnalg(1, &b1) == PALG_STATUS_OK);
  CHECK(palg_algebra_size(b1) == 3);
  CHECK(palg_algebra_star(b1, 1, &x) == PALG_STATUS_OK && x == 0);
  CHECK(palg_eval(b1, "A x. x | x* = 1", &v) == PALG_STATUS_OK && !v);

  CHECK(palg_algebra_n(&n) == PALG_STATUS_OK);
  CHECK(palg_find_embedding(b1, n, map, 3) == PALG_STATUS_OK);
  CHECK(map[0] == 0 && map[2] == 5);

  CHECK(palg_algebra_meet(b1, 0, 9, &x) == PALG_STATUS_OUT_OF_RANGE);
  CHECK(palg_last_error() != NULL);

  CHECK(palg_encode_graph("graph { a -- b; }", 0, &g) == PALG_STATUS_OK);
  CHECK(palg_recover_graph(g, &dot) == PALG_STATUS_OK);
  CHECK(strstr(dot, "--") != NULL);

  palg_string_free(dot);
  palg_algebra_free(g);
  palg_algebra_free(n);
  palg_algebra_free(b1);
  puts("ok");
  return 0;
}
