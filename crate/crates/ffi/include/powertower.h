#ifndef POWERTOWER_H
#define POWERTOWER_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum PtStatus {
  PT_STATUS_OK = 0,
  PT_STATUS_NULL_POINTER = 1,
  PT_STATUS_INVALID_UTF8 = 2,
  PT_STATUS_PARSE = 3,
  PT_STATUS_MAGNITUDE = 4,
  PT_STATUS_UNSUPPORTED = 5,
  PT_STATUS_DOMAIN = 6,
  PT_STATUS_INTERNAL = 7,
} PtStatus;

typedef enum PtOutcome {
  PT_OUTCOME_EQUAL = 0,
  PT_OUTCOME_NOT_EQUAL = 1,
  PT_OUTCOME_UNKNOWN = 2,
} PtOutcome;

typedef enum PtMethod {
  PT_METHOD_EXACT_FIELD = 0,
  PT_METHOD_MONOMIAL_NORMAL_FORM = 1,
  PT_METHOD_TRANSCENDENCE_RULE = 2,
  PT_METHOD_INTERVAL_SEPARATION = 3,
  PT_METHOD_STRUCTURAL = 4,
} PtMethod;

/**
 * Opaque handle to a positive real `B^E`.
 */
typedef struct PtPowNum PtPowNum;

/**
 * Outcome of an equality decision. `width_log2` is meaningful only when
 * `has_width` is set.
 */
typedef struct PtVerdict {
  enum PtOutcome outcome;
  enum PtMethod method;
  bool has_width;
  int64_t width_log2;
} PtVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *pt_last_error(void);

/**
 * Parses and lowers an expression such as `"(1/2)^^3"`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PtStatus pt_parse(const char *text, uint64_t base, struct PtPowNum **out);

/**
 * `B^q` for the rational `q` written as `"p/q"` or `"p"`.
 *
 * # Safety
 * `q` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PtStatus pt_atom(uint64_t base, const char *q, struct PtPowNum **out);

/**
 * Tower of height `h` over `x`.
 *
 * # Safety
 * `x` must be a live handle and `out` a valid pointer.
 */
enum PtStatus pt_tower(const struct PtPowNum *x, int64_t h, struct PtPowNum **out);

/**
 * Product `x · y`.
 *
 * # Safety
 * `x`, `y` must be live handles and `out` a valid pointer.
 */
enum PtStatus pt_mul(const struct PtPowNum *x, const struct PtPowNum *y, struct PtPowNum **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `x` must be null or a handle not yet freed.
 */
void pt_free(struct PtPowNum *x);

/**
 * Canonical printed form; free the result with `pt_string_free`.
 *
 * # Safety
 * `x` must be a live handle and `out` a valid pointer.
 */
enum PtStatus pt_canonical(const struct PtPowNum *x, char **out);

/**
 * Decimal enclosure `"[lo, hi]"` at `bits` of precision.
 *
 * # Safety
 * `x` must be a live handle and `out` a valid pointer.
 */
enum PtStatus pt_eval(const struct PtPowNum *x, uint64_t bits, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void pt_string_free(char *s);

/**
 * Decides an equation such as `"2^^3 * 2^^3 = 4^^2"`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PtStatus pt_verify_equation(const char *text,
                                 uint64_t base,
                                 uint64_t bits,
                                 struct PtVerdict *out);

/**
 * Decides `(B^a)↑↑k · (B^b)↑↑m = (B^c)↑↑n`; rationals as `"p/q"`.
 *
 * # Safety
 * `a`, `b`, `c` must be NUL-terminated strings and `out` a valid pointer.
 */
enum PtStatus pt_verify_instance(uint64_t base,
                                 const char *a,
                                 const char *b,
                                 const char *c,
                                 int64_t k,
                                 int64_t m,
                                 int64_t n,
                                 uint64_t bits,
                                 struct PtVerdict *out);

/**
 * All `c` solving the equation for given `a`, `b`, written as a JSON
 * array of `"p/q"` strings (`q = 1` is kept, as in search results).
 *
 * # Safety
 * `a`, `b` must be NUL-terminated strings and `out` a valid pointer.
 */
enum PtStatus pt_solve_gamma(uint64_t base,
                             const char *a,
                             const char *b,
                             int64_t k,
                             int64_t m,
                             int64_t n,
                             char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POWERTOWER_H */
