#ifndef BELLCERT_H
#define BELLCERT_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define BELLCERT_OK 0

#define BELLCERT_NULL_POINTER 1

#define BELLCERT_INVALID_ARGUMENT 2

#define BELLCERT_DOMAIN_ERROR 3

#define BELLCERT_OVERFLOW 4

#define BELLCERT_NO_CONVERGENCE 5

#define BELLCERT_INTERNAL_ERROR 6

/**
 * Integral identity selector for [`bellcert_verify_integral`].
 */
#define BELLCERT_IDENTITY_HK 0

#define BELLCERT_IDENTITY_BELL 1

#define BELLCERT_IDENTITY_FINAL 2

/**
 * An approximate value with its error bound.
 */
typedef struct BellcertApprox BellcertApprox;

/**
 * Reports from a formula verification run over `n = 1..n_max`.
 */
typedef struct BellcertTheoremReports BellcertTheoremReports;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a pointer obtained from this library and not yet freed.
 */
void bellcert_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. Free with [`bellcert_string_free`].
 */
char *bellcert_last_error(void);

/**
 * Bell number `B_n` as a decimal string.
 *
 * # Safety
 * `out` must be valid for writing a pointer.
 */
int32_t bellcert_bell(uint32_t n, char **out);

/**
 * Stirling number of the second kind `S(n, k)` as a decimal string.
 *
 * # Safety
 * `out` must be valid for writing a pointer.
 */
int32_t bellcert_stirling2(uint32_t n, uint32_t k, char **out);

/**
 * Partial Bell polynomial at `count` rationals given as "p/q" strings.
 *
 * # Safety
 * `x` must point to `count` valid NUL-terminated strings and `out` must be
 * valid for writing a pointer.
 */
int32_t bellcert_partial_bell(uint32_t n,
                              uint32_t k,
                              const char *const *x,
                              size_t count,
                              char **out);

/**
 * Kummer `1F1(a; b; z)` at rational strings, to absolute accuracy `2^-precision`.
 *
 * # Safety
 * `a`, `b`, `z` must be valid NUL-terminated strings and `out` valid for writing.
 */
int32_t bellcert_hyp1f1(const char *a,
                        const char *b,
                        const char *z,
                        uint32_t precision,
                        struct BellcertApprox **out);

/**
 * Modified Bessel `I_order(z)` for `z ≥ 0` given as a rational string.
 *
 * # Safety
 * `z` must be a valid NUL-terminated string and `out` valid for writing.
 */
int32_t bellcert_bessel_i(uint32_t order,
                          const char *z,
                          uint32_t precision,
                          struct BellcertApprox **out);

/**
 * Decimal value, faithful at the working precision.
 *
 * # Safety
 * `h` must be a live handle and `out` valid for writing.
 */
int32_t bellcert_approx_value(const struct BellcertApprox *h, char **out);

/**
 * Error bound, rounded up to three significant digits.
 *
 * # Safety
 * `h` must be a live handle and `out` valid for writing.
 */
int32_t bellcert_approx_error_bound(const struct BellcertApprox *h, char **out);

/**
 * Number of series terms summed.
 *
 * # Safety
 * `h` must be a live handle and `out` valid for writing.
 */
int32_t bellcert_approx_terms_used(const struct BellcertApprox *h, size_t *out);

/**
 * Releases an approximation handle. Null is ignored.
 *
 * # Safety
 * `h` must be null or a live handle; it is invalid afterwards.
 */
void bellcert_approx_free(struct BellcertApprox *h);

/**
 * Verifies the Bell-number formula for `n = 1..n_max` at `precision` bits.
 *
 * # Safety
 * `out` must be valid for writing a pointer.
 */
int32_t bellcert_verify_theorem(uint32_t n_max,
                                uint32_t precision,
                                struct BellcertTheoremReports **out);

/**
 * Number of reports in the handle, or 0 for null.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t bellcert_theorem_reports_len(const struct BellcertTheoremReports *h);

/**
 * Pass flag and residual of report `index`.
 *
 * # Safety
 * `h` must be a live handle; `pass` and `residual` must be valid for writing.
 */
int32_t bellcert_theorem_report_get(const struct BellcertTheoremReports *h,
                                    size_t index,
                                    uint32_t *n,
                                    bool *pass,
                                    char **residual);

/**
 * Releases a report handle. Null is ignored.
 *
 * # Safety
 * `h` must be null or a live handle; it is invalid afterwards.
 */
void bellcert_theorem_reports_free(struct BellcertTheoremReports *h);

/**
 * Checks one integral identity and writes its pass flag.
 *
 * `identity` is one of the `BELLCERT_IDENTITY_*` constants; `param` is `k`
 * or `n`; `z` (a rational string) is only read for the `H_k` identity.
 *
 * # Safety
 * `z` must be null or a valid NUL-terminated string; `pass` must be valid for writing.
 */
int32_t bellcert_verify_integral(int32_t identity,
                                 uint32_t param,
                                 const char *z,
                                 double tolerance,
                                 uint32_t precision,
                                 bool *pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BELLCERT_H */
