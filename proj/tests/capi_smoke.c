/* The public header must compile as C; exercise a few calls from C. */
#include <stdio.h>
#include <string.h>

#include "lmotif/lmotif.h"

int main(void) {
  const char* text = "NOW, what I want is, Facts.  Teach these boys and girls nothing but Facts.";
  lm_network* net = NULL;
  lm_census* census = NULL;
  uint64_t n = 0;
  if (lm_network_from_text(text, strlen(text), &net) != LM_OK) return 1;
  if (lm_census_compute(net, NULL, 0, 1, &census) != LM_OK) return 2;
  if (lm_census_word_count(census, "facts", 2, 0, &n) != LM_OK || n != 5) return 3;
  lm_census_free(census);
  lm_network_free(net);
  if (lm_network_from_edge_list("x", 1, &net) != LM_ERR_SCHEMA) return 4;
  printf("c api ok\n");
  return 0;
}
