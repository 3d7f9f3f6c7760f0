#include <stddef.h>
#include <stdint.h>

#include "mxml.h"

int LLVMFuzzerTestOneInput(const uint8_t *data, size_t size) {
  mxml_parse((const char *)data, size, NULL);
  return 0;
}
