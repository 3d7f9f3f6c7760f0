#include <stddef.h>
#include <stdint.h>

#include "mimg.h"

int LLVMFuzzerTestOneInput(const uint8_t *data, size_t size) {
  mimg_image img;
  if (mimg_decode(data, size, &img) == 0) mimg_free(&img);
  return 0;
}
