/*
 * Demo consumer: load a centroid model package, classify one image,
 * print the result, free the handle.
 *
 *   demo MODEL_PACKAGE_DIR IMAGE_FILE(.pgm|.ppm)
 *
 * Prints "class=<idx> conf=<conf> label=<desc>" on success and exits 0.
 * On an FFI failure the exit code is the OdrStatus value and the status
 * name goes to stderr.
 */

#include <stdint.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "odr_centroid.h"

static const char *status_name(OdrStatus s) {
  switch (s) {
    case ODR_OK: return "OK";
    case ODR_NOT_FOUND: return "NOT_FOUND";
    case ODR_BAD_PACKAGE: return "BAD_PACKAGE";
    case ODR_BAD_INPUT: return "BAD_INPUT";
    case ODR_BAD_HANDLE: return "BAD_HANDLE";
    case ODR_CAPACITY: return "CAPACITY";
    default: return "INTERNAL";
  }
}

static void print_last_error(void) {
  char msg[512];
  if (odr_last_error(msg, sizeof msg) == ODR_OK && msg[0] != '\0')
    fprintf(stderr, ": %s", msg);
  fputc('\n', stderr);
}

/* Minimal binary PGM(P5)/PPM(P6) reader, maxval 255. */
static int read_token(FILE *f, char *buf, size_t cap) {
  int c;
  size_t n = 0;
  do {
    c = fgetc(f);
    if (c == '#') {
      while (c != '\n' && c != EOF) c = fgetc(f);
    }
  } while (c == ' ' || c == '\t' || c == '\r' || c == '\n');
  while (c != EOF && c != ' ' && c != '\t' && c != '\r' && c != '\n') {
    if (n + 1 < cap) buf[n++] = (char)c;
    c = fgetc(f);
  }
  buf[n] = '\0';
  return n > 0 ? 0 : -1;
}

static unsigned char *read_image(const char *path, uint32_t *w, uint32_t *h,
                                 uint32_t *channels, uint64_t *len) {
  FILE *f = fopen(path, "rb");
  if (!f) {
    fprintf(stderr, "error: cannot open image file %s\n", path);
    return NULL;
  }
  char tok[64];
  if (read_token(f, tok, sizeof tok) != 0 ||
      (strcmp(tok, "P5") != 0 && strcmp(tok, "P6") != 0)) {
    fprintf(stderr, "error: %s is not a binary P5/P6 file\n", path);
    fclose(f);
    return NULL;
  }
  *channels = strcmp(tok, "P6") == 0 ? 3 : 1;
  char ws[64], hs[64], ms[64];
  if (read_token(f, ws, sizeof ws) != 0 || read_token(f, hs, sizeof hs) != 0 ||
      read_token(f, ms, sizeof ms) != 0 || atoi(ms) != 255) {
    fprintf(stderr, "error: %s has an unsupported header\n", path);
    fclose(f);
    return NULL;
  }
  *w = (uint32_t)atoi(ws);
  *h = (uint32_t)atoi(hs);
  *len = (uint64_t)(*w) * (*h) * (*channels);
  unsigned char *data = malloc(*len);
  if (!data || fread(data, 1, *len, f) != *len) {
    fprintf(stderr, "error: %s has truncated pixel data\n", path);
    free(data);
    fclose(f);
    return NULL;
  }
  fclose(f);
  return data;
}

int main(int argc, char **argv) {
  if (argc != 3) {
    fprintf(stderr, "usage: %s MODEL_PACKAGE_DIR IMAGE_FILE\n", argv[0]);
    return 64;
  }

  uint32_t width, height, channels;
  uint64_t len;
  unsigned char *pixels = read_image(argv[2], &width, &height, &channels, &len);
  if (!pixels) return 1;

  uint64_t handle = 0;
  OdrStatus status = odr_load_centroid(argv[1], &handle);
  if (status != ODR_OK) {
    fprintf(stderr, "error: %s", status_name(status));
    print_last_error();
    free(pixels);
    return (int)status;
  }

  OdrImageDesc desc = {
      .data = pixels,
      .len = len,
      .width = width,
      .height = height,
      .channels = channels,
      .layout = ODR_LAYOUT_HWC, /* PNM payload order */
      .channel_order = ODR_ORDER_RGB,
      .dtype = ODR_DTYPE_U8,
  };
  OdrCategoryOut result;
  status = odr_infer_centroid(handle, &desc, &result);
  free(pixels);
  if (status != ODR_OK) {
    fprintf(stderr, "error: %s", status_name(status));
    print_last_error();
    odr_free(handle);
    return (int)status;
  }

  printf("class=%u conf=%.17g label=%s\n", result.index, result.confidence,
         result.description);

  status = odr_free(handle);
  if (status != ODR_OK) {
    fprintf(stderr, "error: %s", status_name(status));
    print_last_error();
    return (int)status;
  }
  return 0;
}
