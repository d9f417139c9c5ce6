#ifndef SPECRIG_H
#define SPECRIG_H

/* Generated by cbindgen from specrig-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define SPECRIG_OK 0

#define SPECRIG_ERR_IO 1

#define SPECRIG_ERR_VALIDATION 2

#define SPECRIG_ERR_NUMERICS 3

/**
 * Opaque handle to a degree-d rational map on P^1.
 */
typedef struct SpecrigMap SpecrigMap;

/**
 * Opaque handle to a truncated multiplier-spectrum table (S_1..S_n).
 */
typedef struct SpecrigSpectrum SpecrigSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string. Do not free.
 */
const char *specrig_version(void);

/**
 * Message of the most recent failure on this thread, or NULL if the last
 * call succeeded. Free the result with `specrig_string_free`.
 */
char *specrig_last_error_message(void);

/**
 * Frees a string returned by this library. NULL is a no-op.
 *
 * # Safety
 * `s` must be a pointer previously returned by a specrig function that
 * documents `specrig_string_free`, not yet freed.
 */
void specrig_string_free(char *s);

/**
 * Parses a rational map from its JSON encoding
 * `{"degree", "num": {"coeffs": [[re,im],...]}, "den": {...}}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for writes.
 */
int32_t specrig_map_from_json(const char *json, struct SpecrigMap **out);

/**
 * Serializes a map back to JSON. Free the string with
 * `specrig_string_free`.
 *
 * # Safety
 * `map` must come from `specrig_map_from_json` and be live; `out` must be
 * valid for writes.
 */
int32_t specrig_map_to_json(const struct SpecrigMap *map, char **out);

/**
 * Degree of the map.
 *
 * # Safety
 * `map` must be a live handle; `out` must be valid for writes.
 */
int32_t specrig_map_degree(const struct SpecrigMap *map, size_t *out);

/**
 * Frees a map handle. NULL is a no-op.
 *
 * # Safety
 * `map` must come from `specrig_map_from_json` and not be freed twice.
 */
void specrig_map_free(struct SpecrigMap *map);

/**
 * Truncated multiplier spectrum (S_1..S_{n_max}) of the map.
 *
 * # Safety
 * `map` must be a live handle; `out` must be valid for writes.
 */
int32_t specrig_tau(const struct SpecrigMap *map, size_t n_max, struct SpecrigSpectrum **out);

/**
 * Serializes a spectrum table to JSON (complex numbers as [re, im]).
 * Free the string with `specrig_string_free`.
 *
 * # Safety
 * `spectrum` must be a live handle; `out` must be valid for writes.
 */
int32_t specrig_spectrum_to_json(const struct SpecrigSpectrum *spectrum, char **out);

/**
 * Copies S_n as interleaved doubles into `buf` and stores the number of
 * multipliers in `out_len`. Call with `buf == NULL` (or `cap == 0`) to
 * query the length only; otherwise `cap` must be at least `2 * len`.
 *
 * # Safety
 * `spectrum` must be a live handle; `buf`, when non-NULL, must be valid
 * for `cap` double writes; `out_len` must be valid for writes.
 */
int32_t specrig_spectrum_multipliers(const struct SpecrigSpectrum *spectrum,
                                     size_t n,
                                     double *buf,
                                     size_t cap,
                                     size_t *out_len);

/**
 * Compares two spectrum tables: distance and an equality verdict at the
 * given tolerance (pass `tol <= 0` for the default 1e-6).
 *
 * # Safety
 * `a` and `b` must be live handles; the out-pointers must be valid for
 * writes.
 */
int32_t specrig_spectrum_compare(const struct SpecrigSpectrum *a,
                                 const struct SpecrigSpectrum *b,
                                 double tol,
                                 double *out_distance,
                                 bool *out_equal);

/**
 * Frees a spectrum handle. NULL is a no-op.
 *
 * # Safety
 * `spectrum` must come from `specrig_tau` and not be freed twice.
 */
void specrig_spectrum_free(struct SpecrigSpectrum *spectrum);

/**
 * Green (escape-rate) value of the critical point of z^d + t at the
 * parameter `t_re + i*t_im`, after `n_iter` lift iterations.
 *
 * # Safety
 * `out_value` and `out_error` must be valid for writes.
 */
int32_t specrig_green_unicritical(size_t d,
                                  double t_re,
                                  double t_im,
                                  size_t n_iter,
                                  double *out_value,
                                  double *out_error);

/**
 * PCF parameters of z^d + t: centers of the given period when
 * `preperiod == 0`, Misiurewicz parameters otherwise. Same buffer
 * protocol as `specrig_spectrum_multipliers`.
 *
 * # Safety
 * `buf`, when non-NULL, must be valid for `cap` double writes; `out_len`
 * must be valid for writes.
 */
int32_t specrig_pcf_parameters(size_t d,
                               size_t period,
                               size_t preperiod,
                               double *buf,
                               size_t cap,
                               size_t *out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECRIG_H */
