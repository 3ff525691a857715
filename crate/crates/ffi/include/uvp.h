#ifndef UVP_H
#define UVP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum UvpStatus {
  UVP_STATUS_OK = 0,
  UVP_STATUS_NULL_POINTER = 1,
  UVP_STATUS_INVALID_ARGUMENT = 2,
  UVP_STATUS_INVALID_BUDGET = 3,
  UVP_STATUS_BUDGET_EXHAUSTED = 4,
  UVP_STATUS_INSUFFICIENT_CANDIDATES = 5,
  UVP_STATUS_PARSE = 6,
  UVP_STATUS_SCHEMA = 7,
  UVP_STATUS_IO = 8,
  UVP_STATUS_OUT_OF_RANGE = 9,
  UVP_STATUS_INTERNAL = 10,
} UvpStatus;

typedef enum UvpPredictor {
  UVP_PREDICTOR_TWO_POINT = 0,
  UVP_PREDICTOR_TAIL_FIT = 1,
} UvpPredictor;

/**
 * Opaque candidate set with its value oracle.
 */
typedef struct UvpInstance UvpInstance;

/**
 * Opaque result of one solver run.
 */
typedef struct UvpOutcome UvpOutcome;

/**
 * Solver and baseline parameters. Obtain defaults from
 * [`uvp_solver_config_default`] and override fields as needed.
 */
typedef struct UvpSolverConfig {
  size_t budget;
  size_t horizon;
  size_t p;
  double epsilon;
  double delta;
  double theta;
  enum UvpPredictor predictor;
  size_t eta;
  size_t iterations;
  uint64_t seed;
} UvpSolverConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Loads a long-format CSV table (`id,x0,...,b,value`).
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum UvpStatus uvp_instance_from_tabular(const char *path,
                                         bool normalize,
                                         struct UvpInstance **out);

/**
 * Samples `n` uniform points over a named landscape's domain.
 *
 * # Safety
 * `kind` must be a NUL-terminated string and `out` a valid pointer.
 */
enum UvpStatus uvp_instance_landscape(const char *kind,
                                      size_t n,
                                      uint64_t seed,
                                      size_t horizon,
                                      struct UvpInstance **out);

/**
 * Builds an adversarial clustered instance (`variant` is "fc" or "ac").
 *
 * # Safety
 * `variant` must be a NUL-terminated string and `out` a valid pointer.
 */
enum UvpStatus uvp_instance_hard(const char *variant,
                                 double epsilon,
                                 double beta,
                                 double theta,
                                 size_t k,
                                 size_t n_per_cluster,
                                 double r,
                                 size_t horizon,
                                 uint64_t seed,
                                 struct UvpInstance **out);

/**
 * Number of candidate configurations; 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t uvp_instance_len(const struct UvpInstance *inst);

/**
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t uvp_instance_horizon(const struct UvpInstance *inst);

/**
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t uvp_instance_dimension(const struct UvpInstance *inst);

/**
 * # Safety
 * `inst` must be null or a handle not yet freed.
 */
void uvp_instance_free(struct UvpInstance *inst);

/**
 * Defaults for horizon `T`: budget `20 T`, `p = 25`, `epsilon = 0.2`,
 * `delta = 0.1`, `theta = 0.3`, tail-fit prediction, `eta = 3` and 6 brackets.
 */
struct UvpSolverConfig uvp_solver_config_default(size_t horizon);

/**
 * Runs the named algorithm ("full-cent", "e-full-cent", "ada-cent",
 * "e-ada-cent", "random", "sha" or "hyperband").
 *
 * # Safety
 * `inst` must be a live handle, `algo` a NUL-terminated string, `config` a
 * valid pointer and `out` a valid pointer.
 */
enum UvpStatus uvp_solve(const struct UvpInstance *inst,
                         const char *algo,
                         const struct UvpSolverConfig *config,
                         struct UvpOutcome **out);

/**
 * # Safety
 * `outcome` must be a live handle; `id` and `value` valid pointers.
 */
enum UvpStatus uvp_outcome_best(const struct UvpOutcome *outcome, size_t *id, double *value);

/**
 * Units spent by the run; 0 for a null handle.
 *
 * # Safety
 * `outcome` must be null or a live handle.
 */
size_t uvp_outcome_spent(const struct UvpOutcome *outcome);

/**
 * # Safety
 * `outcome` must be null or a live handle.
 */
size_t uvp_outcome_trace_len(const struct UvpOutcome *outcome);

/**
 * Copies up to `len` trace points into the caller's arrays. Fails with
 * `UVP_STATUS_OUT_OF_RANGE` when `len` is smaller than the trace.
 *
 * # Safety
 * `outcome` must be a live handle; `spent` and `incumbent` must each point to
 * at least `len` writable elements.
 */
enum UvpStatus uvp_outcome_trace(const struct UvpOutcome *outcome,
                                 size_t *spent,
                                 double *incumbent,
                                 size_t len);

/**
 * # Safety
 * `outcome` must be null or a handle not yet freed.
 */
void uvp_outcome_free(struct UvpOutcome *outcome);

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *uvp_last_error_message(void);

/**
 * Static description of a status code; unknown codes map to "unknown status".
 */
const char *uvp_status_str(int32_t status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UVP_H */
