#ifndef STURMIAN_H
#define STURMIAN_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every fallible call. Library errors use the command-line exit codes.
 */
typedef enum {
  STM_STATUS_OK = 0,
  STM_STATUS_PARSE = 2,
  STM_STATUS_VALIDATION = 3,
  STM_STATUS_UNKNOWN_KIND = 4,
  STM_STATUS_IO = 5,
  STM_STATUS_PRECISION = 10,
  STM_STATUS_ALGEBRA = 11,
  STM_STATUS_HEIGHTS = 12,
  STM_STATUS_WORDS = 13,
  STM_STATUS_NOT_ON_ATTRACTOR = 14,
  STM_STATUS_NULL_POINTER = 20,
  STM_STATUS_INVALID_UTF8 = 21,
  STM_STATUS_BUFFER_TOO_SMALL = 22,
  STM_STATUS_PANIC = 23,
} StmStatus;

/*
 Contracted rotation `x -> {lambda x + delta}` on [0, 1).
 */
typedef struct StmRotation StmRotation;

/*
 Finite word over {0, 1}.
 */
typedef struct StmWord StmWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version, a static NUL-terminated string.
 */
const char *stm_version(void);

/*
 Message of the last failed call on this thread, or NULL. Valid until the next
 call into the library on the same thread.
 */
const char *stm_last_error(void);

/*
 Free a string returned by this library.

 # Safety
 `s` must be NULL or a string returned by this library that was not yet freed.
 */
void stm_string_free(char *s);

/*
 Prefix of length `n` of the Fibonacci word.

 # Safety
 `out` must be valid for writes.
 */
StmStatus stm_fibonacci_word(size_t n, StmWord **out);

/*
 Coding `u_1 .. u_n` (origin 1) or `u_0 .. u_{n-1}` (origin 0) of `x` under rotation by `theta`.

 # Safety
 `theta` and `x` must be NUL-terminated strings; `out` must be valid for writes.
 */
StmStatus stm_theta_coding(const char *theta,
                           const char *x,
                           uint8_t origin,
                           size_t n,
                           StmWord **out);

/*
 Number of symbols; 0 for NULL.

 # Safety
 `w` must be NULL or a live word handle.
 */
size_t stm_word_len(const StmWord *w);

/*
 Copy the symbols into `buf`, which holds `cap` bytes.

 # Safety
 `w` must be a live word handle and `buf` valid for `cap` writes.
 */
StmStatus stm_word_symbols(const StmWord *w, uint8_t *buf, size_t cap);

/*
 Release a word handle.

 # Safety
 `w` must be NULL or a live word handle; it is invalid afterwards.
 */
void stm_word_free(StmWord *w);

/*
 Positions `m` in `[0, s]` with `u_m != u_{m+r}`. `out_len` receives the count
 even when the buffer is too small.

 # Safety
 `w` must be a live word handle, `buf` valid for `cap` writes, `out_len` valid for writes.
 */
StmStatus stm_mismatch_set(const StmWord *w,
                           size_t r,
                           size_t s,
                           size_t *buf,
                           size_t cap,
                           size_t *out_len);

/*
 Number of distinct factors of length `n`.

 # Safety
 `w` must be a live word handle and `out` valid for writes.
 */
StmStatus stm_subword_complexity(const StmWord *w, size_t n, size_t *out);

/*
 Rotation with exact `lambda` and `delta`, `lambda + delta > 1`.

 # Safety
 `lambda` and `delta` must be NUL-terminated strings; `out` must be valid for writes.
 */
StmStatus stm_rotation_new(const char *lambda, const char *delta, StmRotation **out);

/*
 Rotation whose offset is the unique one with rotation number `theta` (irrational).

 # Safety
 `lambda` and `theta` must be NUL-terminated strings; `out` must be valid for writes.
 */
StmStatus stm_rotation_with_rotation(const char *lambda, const char *theta, StmRotation **out);

/*
 `f(x)` as an exact literal and the branch taken (1 when it wraps).

 # Safety
 `h` must be a live rotation handle, `x` a NUL-terminated string, outputs valid for writes.
 The string written to `out_value` must be released with `stm_string_free`.
 */
StmStatus stm_rotation_apply(const StmRotation *h,
                             const char *x,
                             char **out_value,
                             uint8_t *out_branch);

/*
 Rotation-number enclosure after `n` steps as JSON `{mid, rad, bits}`.

 # Safety
 `h` must be a live rotation handle and `out_json` valid for writes. The string
 must be released with `stm_string_free`.
 */
StmStatus stm_rotation_number(const StmRotation *h, uint64_t n, char **out_json);

/*
 Release a rotation handle.

 # Safety
 `h` must be NULL or a live rotation handle; it is invalid afterwards.
 */
void stm_rotation_free(StmRotation *h);

/*
 Run an experiment manifest given as JSON text and return the versioned report.
 `prec` overrides the manifest precision when nonzero. Output files named in the
 manifest are written as by the command-line tool.

 # Safety
 `manifest` must be a NUL-terminated string and `out_json` valid for writes. The
 string must be released with `stm_string_free`.
 */
StmStatus stm_run_manifest(const char *manifest, uint32_t prec, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STURMIAN_H */
