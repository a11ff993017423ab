/* Plain-C consumer of the public header. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "congamma/congamma.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(void) {
  congamma_policy* pol = NULL;
  congamma_series* s = NULL;
  size_t need = 0;
  char* buf;

  EXPECT(congamma_policy_new(25, 100000, 1e-12, &pol) == CONGAMMA_OK);
  EXPECT(congamma_pi1_bar(pol, 1e6, &s) == CONGAMMA_OK);
  EXPECT(congamma_series_value(s, NULL, 0, &need) == CONGAMMA_E_BUFFER);
  buf = malloc(need);
  EXPECT(congamma_series_value(s, buf, need, &need) == CONGAMMA_OK);
  EXPECT(atof(buf) > 78000.0 && atof(buf) < 79000.0);
  free(buf);
  congamma_series_free(s);

  EXPECT(congamma_log_integral(pol, "1", NULL, 0, &need) == CONGAMMA_E_DOMAIN);
  EXPECT(strlen(congamma_last_error()) > 0);
  congamma_policy_free(pol);

  if (failures) return 1;
  printf("C API smoke: ok (%s)\n", congamma_version());
  return 0;
}
