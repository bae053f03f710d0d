#ifndef SGA_H
#define SGA_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SgaAlgo {
  SGA_ALGO_CLASSIC = 0,
  SGA_ALGO_EXTENDED = 1,
} SgaAlgo;

// Result code of every fallible call.
typedef enum SgaStatus {
  SGA_STATUS_OK = 0,
  // A required pointer argument was null or a string was not UTF-8.
  SGA_STATUS_INVALID_ARGUMENT = 1,
  // Configuration or precondition failure (CLI exit code 2).
  SGA_STATUS_VALIDATION = 2,
  // Numerical or coverage failure (CLI exit code 3).
  SGA_STATUS_NUMERICAL = 3,
  SGA_STATUS_IO = 4,
  // Malformed file contents.
  SGA_STATUS_FORMAT = 5,
  // Caller buffer too small.
  SGA_STATUS_BUFFER_TOO_SMALL = 6,
  // Internal error; the library state is unchanged.
  SGA_STATUS_PANIC = 7,
} SgaStatus;

typedef struct SgaConfig SgaConfig;

typedef struct SgaImage SgaImage;

typedef struct SgaRaster SgaRaster;

// Impulse-response measurements of one configured target. `found` is 0
// when no peak was found near `expected_x`, `expected_y`; the remaining
// fields are then NaN.
typedef struct SgaIrfReport {
  int32_t found;
  double expected_x;
  double expected_y;
  double peak_x;
  double peak_y;
  double width_az;
  double width_rg;
  double pslr_az;
  double pslr_rg;
  double islr_az;
  double islr_rg;
  double peak_mag;
} SgaIrfReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static NUL-terminated string.
const char *sga_version(void);

// Message of the last failed call on this thread. Valid until the next
// failing call on the same thread; empty if none failed.
const char *sga_last_error(void);

// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum SgaStatus sga_config_from_json(const char *json, struct SgaConfig **out);

// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum SgaStatus sga_config_load(const char *path, struct SgaConfig **out);

// # Safety
// `cfg` must be null or a handle from `sga_config_*` not yet freed.
void sga_config_free(struct SgaConfig *cfg);

// Simulates the raw echoes of the configured targets.
//
// # Safety
// `cfg` must be a live handle and `out` a valid pointer.
enum SgaStatus sga_simulate(const struct SgaConfig *cfg, struct SgaRaster **out);

// # Safety
// `raster` must be a live handle; `n_az` and `n_rg` valid pointers.
enum SgaStatus sga_raster_dims(const struct SgaRaster *raster, uintptr_t *n_az, uintptr_t *n_rg);

// Copies the samples as interleaved (re, im) floats, azimuth-major.
// `len` is the capacity of `out` in floats and must be at least
// `2·n_az·n_rg`.
//
// # Safety
// `raster` must be a live handle and `out` valid for `len` floats.
enum SgaStatus sga_raster_copy_data(const struct SgaRaster *raster, float *out, uintptr_t len);

// Reads an SGAR file; `.sgar` is appended to `path` when missing.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum SgaStatus sga_raster_read(const char *path, struct SgaRaster **out);

// # Safety
// `raster` must be a live handle and `path` a NUL-terminated string.
enum SgaStatus sga_raster_write(const struct SgaRaster *raster, const char *path);

// # Safety
// `raster` must be null or a live handle.
void sga_raster_free(struct SgaRaster *raster);

// Focuses a raw raster. `cfg` may be null, in which case the acquisition
// record stored with the raster is used. Extended processing of spotlight
// data runs the classic chain.
//
// # Safety
// `raw` must be a live handle, `cfg` null or a live handle, `out` valid.
enum SgaStatus sga_focus(const struct SgaRaster *raw,
                         const struct SgaConfig *cfg,
                         enum SgaAlgo algo,
                         struct SgaImage **out);

// Measures every target of `cfg` in the image. Writes up to `cap` reports
// to `out` and the number of configured targets to `n_targets`; returns
// `BufferTooSmall` if `cap` is short.
//
// # Safety
// `img` and `cfg` must be live handles, `out` valid for `cap` reports
// (may be null when `cap` is 0), `n_targets` a valid pointer.
enum SgaStatus sga_image_analyze(const struct SgaImage *img,
                                 const struct SgaConfig *cfg,
                                 struct SgaIrfReport *out,
                                 uintptr_t cap,
                                 uintptr_t *n_targets);

// A raster handle holding a copy of the image and its metadata.
//
// # Safety
// `img` must be a live handle and `out` a valid pointer.
enum SgaStatus sga_image_raster(const struct SgaImage *img, struct SgaRaster **out);

// # Safety
// `img` must be a live handle and `path` a NUL-terminated string.
enum SgaStatus sga_image_write(const struct SgaImage *img, const char *path);

// # Safety
// `img` must be null or a live handle.
void sga_image_free(struct SgaImage *img);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SGA_H */
