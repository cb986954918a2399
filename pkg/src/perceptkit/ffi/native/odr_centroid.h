/*
 * C inference surface for centroid model packages.
 *
 * Usage: odr_load_centroid() materializes a validated model package into
 * an opaque handle; odr_infer_centroid() classifies one image; odr_free()
 * releases the handle. Every function returns an OdrStatus and never
 * throws or aborts across this boundary. The caller owns every buffer it
 * passes in; the library owns only handle-internal state.
 *
 * Thread safety: distinct handles may be used concurrently; concurrent
 * calls on one handle are serialized internally. Handles are never reused
 * within a process lifetime, and 0 is never a valid handle.
 */

#ifndef ODR_CENTROID_H
#define ODR_CENTROID_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; stable across releases. */
typedef enum OdrStatus {
  ODR_OK = 0,
  ODR_NOT_FOUND = 1,   /* package path does not exist */
  ODR_BAD_PACKAGE = 2, /* manifest/schema/checksum/payload failure */
  ODR_BAD_INPUT = 3,   /* image description is inconsistent */
  ODR_BAD_HANDLE = 4,  /* unknown, freed, or zero handle */
  ODR_CAPACITY = 5,    /* too many live handles */
  ODR_INTERNAL = 6     /* unexpected internal failure */
} OdrStatus;

/* Image buffer codes; numeric values are part of the ABI. */
enum { ODR_LAYOUT_CHW = 0, ODR_LAYOUT_HWC = 1 };
enum { ODR_ORDER_RGB = 0, ODR_ORDER_BGR = 1 };
enum { ODR_DTYPE_U8 = 0, ODR_DTYPE_F32 = 1 };

typedef struct OdrImageDesc {
  const void *data;       /* pixel buffer, caller owned */
  uint64_t len;           /* buffer length in bytes */
  uint32_t width;         /* pixels */
  uint32_t height;        /* pixels */
  uint32_t channels;      /* 1 or 3 */
  uint32_t layout;        /* ODR_LAYOUT_* */
  uint32_t channel_order; /* ODR_ORDER_*; ignored for 1-channel images */
  uint32_t dtype;         /* ODR_DTYPE_*; F32 samples must lie in [0, 1] */
} OdrImageDesc;

#define ODR_DESCRIPTION_CAP 64

typedef struct OdrCategoryOut {
  uint32_t index;                        /* predicted class id */
  uint32_t reserved;                     /* alignment padding; always 0 */
  double confidence;                     /* softmax confidence in [0, 1] */
  char description[ODR_DESCRIPTION_CAP]; /* NUL-terminated, truncated label */
} OdrCategoryOut;

/* Load a centroid model package from a directory path (UTF-8).
 * On ODR_OK, *out_handle receives a nonzero handle; on failure it is
 * left untouched. */
OdrStatus odr_load_centroid(const char *package_path_utf8, uint64_t *out_handle);

/* Classify one image. On ODR_OK, *out is fully populated. */
OdrStatus odr_infer_centroid(uint64_t handle, const OdrImageDesc *image,
                             OdrCategoryOut *out);

/* Release a handle. A second free of the same handle returns
 * ODR_BAD_HANDLE. */
OdrStatus odr_free(uint64_t handle);

/* Copy the calling thread's most recent error message (NUL-terminated,
 * truncated to capacity). Empty string if no error has occurred. */
OdrStatus odr_last_error(char *buffer, uint64_t capacity);

#ifdef __cplusplus
}
#endif

#endif /* ODR_CENTROID_H */
