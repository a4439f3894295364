#ifndef CATQ_H
#define CATQ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum CatqStatus {
  CATQ_STATUS_OK = 0,
  CATQ_STATUS_NULL_POINTER = 1,
  CATQ_STATUS_INVALID_UTF8 = 2,
  CATQ_STATUS_PARSE = 3,
  CATQ_STATUS_INVALID = 4,
  CATQ_STATUS_NO_SOLUTION = 5,
  CATQ_STATUS_PANIC = 6,
} CatqStatus;

/**
 * Rescaling functor handle.
 */
typedef struct CatqFunctor CatqFunctor;

/**
 * Parameter set handle.
 */
typedef struct CatqParams CatqParams;

/**
 * Verification report handle.
 */
typedef struct CatqReport CatqReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread (empty after success).
 * The pointer stays valid until the next call on the same thread.
 */
const char *catq_last_error(void);

/**
 * Free a string returned by this library.
 *
 * # Safety
 * `s` must be null or a pointer obtained from this library.
 */
void catq_string_free(char *s);

/**
 * Load parameters from a JSON parameter file.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum CatqStatus catq_params_from_json(const char *json, struct CatqParams **out);

/**
 * Generic symbolic parameters over type A_rank (β = −1 when `cyclic`).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum CatqStatus catq_params_symbolic_a(uint32_t rank, bool cyclic, struct CatqParams **out);

/**
 * Serialize parameters back to JSON.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum CatqStatus catq_params_to_json(const struct CatqParams *p, char **out);

/**
 * # Safety
 * `p` must be null or a handle from this library, not yet freed.
 */
void catq_params_free(struct CatqParams *p);

/**
 * Count compatibility violations on the window [−window, window].
 *
 * # Safety
 * `p` must be a live handle and `violations` a valid pointer.
 */
enum CatqStatus catq_params_check(const struct CatqParams *p, int64_t window, size_t *violations);

/**
 * Value of the bubble at vertex label `vertex`, weight text `weight`
 * (`[a,b]` or `(a,b,c)`) with `dots` dots.
 *
 * # Safety
 * `p` must be a live handle, `weight` a nul-terminated string and `out` a valid pointer.
 */
enum CatqStatus catq_bubble_eval(const struct CatqParams *p,
                                 uint32_t vertex,
                                 const char *weight,
                                 int64_t dots,
                                 bool clockwise,
                                 char **out);

/**
 * Write φ_{n,d}(μ) into `entries` (length n). Returns `NoSolution` when
 * d is in the wrong residue class.
 *
 * # Safety
 * `mu` must point to n−1 values and `entries` to room for n.
 */
enum CatqStatus catq_weights_glmap(size_t n, int64_t d, const int64_t *mu, int64_t *entries);

/**
 * Build a functor from a spec JSON (`{"functor": .., "source": .., ..}`).
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum CatqStatus catq_functor_from_json(const char *json, struct CatqFunctor **out);

/**
 * Identity functor on a parameter set.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum CatqStatus catq_functor_identity(const struct CatqParams *p, struct CatqFunctor **out);

/**
 * # Safety
 * `f` must be null or a handle from this library, not yet freed.
 */
void catq_functor_free(struct CatqFunctor *f);

/**
 * Check every relation on the window [−window, window] (0 threads = default).
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum CatqStatus catq_functor_verify(const struct CatqFunctor *f,
                                    int64_t window,
                                    size_t threads,
                                    struct CatqReport **out);

/**
 * True when no instance failed.
 *
 * # Safety
 * `r` must be a live handle.
 */
bool catq_report_passed(const struct CatqReport *r);

/**
 * Instance counts of a report.
 *
 * # Safety
 * `r` must be a live handle; output pointers may be null.
 */
enum CatqStatus catq_report_counts(const struct CatqReport *r,
                                   size_t *checked,
                                   size_t *failed,
                                   size_t *skipped);

/**
 * Report as JSON.
 *
 * # Safety
 * `r` must be a live handle and `out` a valid pointer.
 */
enum CatqStatus catq_report_to_json(const struct CatqReport *r, char **out);

/**
 * # Safety
 * `r` must be null or a handle from this library, not yet freed.
 */
void catq_report_free(struct CatqReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CATQ_H */
