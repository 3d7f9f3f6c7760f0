#include <stddef.h>
#include <stdint.h>

#include "mdoc.h"

int LLVMFuzzerTestOneInput(const uint8_t *data, size_t size) {
  mdoc_reader *r = mdoc_open_memory(data, size);
  if (r == NULL) return 0;
  while (mdoc_next_record(r) == MDOC_OK) {
  }
  mdoc_close(r);
  return 0;
}
