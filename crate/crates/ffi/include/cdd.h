#ifndef CDD_H
#define CDD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Bumped on any incompatible change to the exported functions.
#define CDD_ABI_VERSION 1

typedef enum CddStatus {
  CDD_STATUS_OK = 0,
  CDD_STATUS_NULL_POINTER = 1,
  CDD_STATUS_INVALID = 2,
  CDD_STATUS_INFEASIBLE_SEED = 3,
  // The solution was produced but its maximality certificate failed.
  CDD_STATUS_NOT_MAXIMAL = 4,
  CDD_STATUS_LOGIC = 6,
  CDD_STATUS_PANIC = 7,
} CddStatus;

// A validated design problem.
typedef struct CddProblem CddProblem;

// A solved orthotope with its audit trail and certificate.
typedef struct CddSolution CddSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

uint32_t cdd_abi_version(void);

// Message for the last failed call on this thread, empty after a success.
// Valid until the next call into this library from the same thread.
const char *cdd_last_error(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void cdd_string_free(char *s);

// Parses a problem document.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum CddStatus cdd_problem_from_json(const char *json, struct CddProblem **out);

// Loads a bundled problem by name (`emissions`, `adas`).
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be writable.
enum CddStatus cdd_problem_bundled(const char *name, struct CddProblem **out);

// # Safety
// `p` must be null or a handle from this library, not yet freed.
void cdd_problem_free(struct CddProblem *p);

// # Safety
// `p` must be null or a live handle.
size_t cdd_problem_dimension(const struct CddProblem *p);

// # Safety
// `p` must be null or a live handle.
size_t cdd_problem_surface_count(const struct CddProblem *p);

// Evaluates every surface at `point` (length = dimension) into `values`
// (length = surface count).
//
// # Safety
// Pointers must be valid for the stated lengths.
enum CddStatus cdd_problem_evaluate(const struct CddProblem *p,
                                    const double *point,
                                    size_t point_len,
                                    double *values,
                                    size_t values_len);

// Replaces the problem's seed.
//
// # Safety
// `p` must be a live handle and `seed` valid for `len` values.
enum CddStatus cdd_problem_set_seed(struct CddProblem *p, const double *seed, size_t len);

// Sets an explicit expansion order; `order` is a permutation of variable indices.
//
// # Safety
// `p` must be a live handle and `order` valid for `len` values.
enum CddStatus cdd_problem_set_ranking(struct CddProblem *p, const size_t *order, size_t len);

// Grows a maximal orthotope around the seed. A solution is written even when
// the status is [`CddStatus::NotMaximal`].
//
// # Safety
// `p` must be a live handle; `out` must be writable.
enum CddStatus cdd_solve(const struct CddProblem *p, struct CddSolution **out);

// # Safety
// `s` must be null or a handle from this library, not yet freed.
void cdd_solution_free(struct CddSolution *s);

// Copies the interval bounds into `lo` and `hi`, each of length `len`.
//
// # Safety
// `s` must be a live handle; `lo` and `hi` valid for `len` values.
enum CddStatus cdd_solution_bounds(const struct CddSolution *s, double *lo, double *hi, size_t len);

// # Safety
// `s` must be null or a live handle.
bool cdd_solution_is_maximal(const struct CddSolution *s);

// Serializes the solution (box, ranking, steps, certificate) as JSON.
//
// # Safety
// `s` must be a live handle; `out` must be writable.
enum CddStatus cdd_solution_to_json(const struct CddSolution *s, char **out);

// Checks every sentence of `theory` (one per line) against a structure
// document and writes whether the structure is a model.
//
// # Safety
// `theory` and `structure_json` must be NUL-terminated; `is_model` writable.
enum CddStatus cdd_logic_check(const char *theory, const char *structure_json, bool *is_model);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CDD_H */
