#ifndef BIPARETO_H
#define BIPARETO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by every function.
typedef enum BpStatus {
  BP_STATUS_OK = 0,
  BP_STATUS_NULL_POINTER = 1,
  BP_STATUS_INVALID_INPUT = 2,
  BP_STATUS_BUDGET_EXCEEDED = 3,
  BP_STATUS_OUT_OF_RANGE = 4,
  BP_STATUS_INTERNAL = 5,
  BP_STATUS_PANIC = 6,
} BpStatus;

// A validated, normalized instance.
typedef struct BpInstance BpInstance;

// A Pareto front together with one schedule per point.
typedef struct BpSolution BpSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds an instance from `n` pairs `(p[i], q[i])`; job `i` gets id `i + 1`.
//
// # Safety
// `p` and `q` must point to `n` readable values; `out` must be writable.
enum BpStatus bipareto_instance_new(const int64_t *p,
                                    const int64_t *q,
                                    size_t n,
                                    struct BpInstance **out);

// Parses the text instance format: a job count followed by `p q` lines,
// `#` starting a comment.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum BpStatus bipareto_instance_parse(const char *text, struct BpInstance **out);

// Number of jobs, or 0 for a null handle.
//
// # Safety
// `inst` must be null or a live handle.
size_t bipareto_instance_len(const struct BpInstance *inst);

// # Safety
// `inst` must be null or a handle not yet freed.
void bipareto_instance_free(struct BpInstance *inst);

// Exact Pareto front. `budget` caps stored states; 0 selects the default.
//
// # Safety
// `inst` must be a live handle; `out` must be writable.
enum BpStatus bipareto_solve_exact(const struct BpInstance *inst,
                                   uint64_t budget,
                                   struct BpSolution **out);

// Approximate front for `eps = eps_num / eps_den`. `budget` as for
// [`bipareto_solve_exact`].
//
// # Safety
// `inst` must be a live handle; `out` must be writable.
enum BpStatus bipareto_solve_fptas(const struct BpInstance *inst,
                                   uint64_t eps_num,
                                   uint64_t eps_den,
                                   uint64_t budget,
                                   struct BpSolution **out);

// Number of front points, or 0 for a null handle.
//
// # Safety
// `sol` must be null or a live handle.
size_t bipareto_solution_len(const struct BpSolution *sol);

// Objective values of point `index`; points are ordered by increasing makespan.
//
// # Safety
// `sol` must be a live handle; `cmax` and `lmax` must be writable.
enum BpStatus bipareto_solution_point(const struct BpSolution *sol,
                                      size_t index,
                                      int64_t *cmax,
                                      int64_t *lmax);

// Machine (1 or 2) running job `job_id` (1-based, input order) in the
// schedule of point `index`.
//
// # Safety
// `sol` must be a live handle; `machine` must be writable.
enum BpStatus bipareto_solution_machine(const struct BpSolution *sol,
                                        size_t index,
                                        size_t job_id,
                                        uint8_t *machine);

// # Safety
// `sol` must be null or a handle not yet freed.
void bipareto_solution_free(struct BpSolution *sol);

// Sets `covered` to whether every point of `exact` has a point of `approx`
// within a factor `1 + eps_num / eps_den` in both objectives.
//
// # Safety
// `exact` and `approx` must be live handles; `covered` must be writable.
enum BpStatus bipareto_coverage_check(const struct BpSolution *exact,
                                      const struct BpSolution *approx,
                                      uint64_t eps_num,
                                      uint64_t eps_den,
                                      bool *covered);

// Static description of a status code.
const char *bipareto_status_message(enum BpStatus status);

// Detail of the last failure on this thread, or null after a success.
// The pointer stays valid until the next call on the same thread.
const char *bipareto_last_error(void);

// Library version as a static string.
const char *bipareto_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIPARETO_H */
