#ifndef CREDAL_H
#define CREDAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Status codes. The first four match the command-line exit codes.
 */
typedef enum CredalStatus {
  CREDAL_STATUS_OK = 0,
  /**
   * Bad input: malformed problem, unknown command or criterion, bad alpha.
   */
  CREDAL_STATUS_USAGE = 1,
  /**
   * The constraints admit no distribution.
   */
  CREDAL_STATUS_INCONSISTENT = 2,
  /**
   * Solver failure or a caught panic.
   */
  CREDAL_STATUS_INTERNAL = 3,
  CREDAL_STATUS_NULL_POINTER = 4,
  CREDAL_STATUS_INVALID_UTF8 = 5,
} CredalStatus;

/**
 * Opaque handle to a parsed problem.
 */
typedef struct CredalProblem CredalProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON problem. On success `*out` receives a handle that must be
 * released with `credal_problem_free`.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum CredalStatus credal_problem_from_json(const char *json, struct CredalProblem **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `problem` must come from `credal_problem_from_json` and not be freed twice.
 */
void credal_problem_free(struct CredalProblem *problem);

/**
 * Number of actions, or 0 for a null handle.
 *
 * # Safety
 * `problem` must be null or a live handle.
 */
uintptr_t credal_problem_action_count(const struct CredalProblem *problem);

/**
 * Writes whether the constraints admit at least one distribution.
 *
 * # Safety
 * `problem` must be a live handle and `out` a valid pointer.
 */
enum CredalStatus credal_problem_is_consistent(const struct CredalProblem *problem, bool *out);

/**
 * Lower and upper expected utility of action `action` (declaration order),
 * rounded to the nearest double. Use `credal_run` with `intervals` for the
 * exact fractions.
 *
 * # Safety
 * `problem` must be a live handle; `lo` and `hi` valid pointers.
 */
enum CredalStatus credal_utility_interval(const struct CredalProblem *problem,
                                          uintptr_t action,
                                          double *lo,
                                          double *hi);

/**
 * Runs a command and writes the result document to `*out`.
 *
 * `command` is one of `check`, `intervals`, `decide`, `maxent`, `reduce`,
 * `reduce-intervals`, `admissible`. `criterion` (for `decide`) is one of
 * `gm`, `gh`, `levi`, `pme`, `maximin`, `hurwicz`, `regret`; `alpha` is a
 * decimal or fraction string or null. With `json` false the document is
 * rendered as text. For `check` on inconsistent constraints the document is
 * still written and the status is `CREDAL_STATUS_INCONSISTENT`. The string
 * must be released with `credal_string_free`.
 *
 * # Safety
 * `problem` must be a live handle, string arguments valid NUL-terminated
 * strings or null, and `out` a valid pointer.
 */
enum CredalStatus credal_run(const struct CredalProblem *problem,
                             const char *command,
                             const char *criterion,
                             const char *alpha,
                             bool json,
                             char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void credal_string_free(char *s);

/**
 * Message for the last failure on this thread, or null. Valid until the next
 * call into this library from the same thread.
 */
const char *credal_last_error_message(void);

/**
 * Library version, a static string.
 */
const char *credal_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CREDAL_H */
