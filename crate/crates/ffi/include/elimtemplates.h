#ifndef ELIMTEMPLATES_H
#define ELIMTEMPLATES_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Solution status as reported by [`et_solution_status`].
typedef enum EtSolutionStatus {
  ET_SOLUTION_STATUS_OK = 0,
  ET_SOLUTION_STATUS_AT_INFINITY = 1,
  ET_SOLUTION_STATUS_RECOVERY_FAILED = 2,
} EtSolutionStatus;

// Status codes; the nonzero values match the command-line exit codes.
typedef enum EtStatus {
  ET_STATUS_OK = 0,
  ET_STATUS_FAILURE = 1,
  ET_STATUS_PARSE = 2,
  ET_STATUS_POSITIVE_DIMENSIONAL = 3,
  ET_STATUS_IO = 4,
  ET_STATUS_SPECIALIZATION_FAILURE = 5,
  ET_STATUS_SUPPORT_MISMATCH = 6,
  ET_STATUS_CORRUPT_TEMPLATE = 7,
  ET_STATUS_NULL_ARGUMENT = 8,
  ET_STATUS_OUT_OF_RANGE = 9,
  ET_STATUS_PANIC = 10,
} EtStatus;

// Opaque list of solutions.
typedef struct EtSolutions EtSolutions;

// Opaque elimination template.
typedef struct EtTemplate EtTemplate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next library call on the same thread.
const char *et_last_error(void);

// Build a template from system-file text. `strategy` is `default`,
// `larsson` or `greedy` (null means `default`); `seed` draws the action form
// when the text has no `action` line.
//
// # Safety
// `system` and `strategy` must be null or nul-terminated strings; `out`
// must be a valid pointer.
enum EtStatus et_template_build(const char *system,
                                const char *strategy,
                                uint64_t seed,
                                struct EtTemplate **out);

// Read a template from its JSON form.
//
// # Safety
// `json` must be null or a nul-terminated string; `out` must be valid.
enum EtStatus et_template_from_json(const char *json, struct EtTemplate **out);

// Serialize a template; free the string with [`et_string_free`].
//
// # Safety
// `t` must be a live template handle and `out` a valid pointer.
enum EtStatus et_template_to_json(const struct EtTemplate *t, char **out);

// Number of standard monomials, the size of the action matrix; 0 for null.
//
// # Safety
// `t` must be null or a live template handle.
size_t et_template_dimension(const struct EtTemplate *t);

// Template matrix size; either output pointer may be null.
//
// # Safety
// `t` must be a live template handle; non-null outputs must be valid.
enum EtStatus et_template_size(const struct EtTemplate *t, size_t *rows, size_t *cols);

// # Safety
// `t` must be null or a handle not yet freed.
void et_template_free(struct EtTemplate *t);

// Solve the instance given as system-file text with the template. The text
// needs the template's variables; its `action` line, if any, replaces the
// action-form coefficients.
//
// # Safety
// `t` must be a live template handle, `system` a nul-terminated string and
// `out` a valid pointer.
enum EtStatus et_solve(const struct EtTemplate *t, const char *system, struct EtSolutions **out);

// Number of eigenpairs, ok or not; 0 for null.
//
// # Safety
// `s` must be null or a live solutions handle.
size_t et_solutions_len(const struct EtSolutions *s);

// # Safety
// `s` must be a live solutions handle and `status` a valid pointer.
enum EtStatus et_solution_status(const struct EtSolutions *s,
                                 size_t index,
                                 enum EtSolutionStatus *status);

// Copy the coordinates of solution `index` into `re` and `im`, which hold
// `len` values each; `len` must be at least the variable count. Points
// without coordinates (at infinity, failed recovery) write nothing and set
// `written` to 0.
//
// # Safety
// `s` must be a live solutions handle; `re` and `im` must point to `len`
// writable doubles; `written` must be null or valid.
enum EtStatus et_solution_coords(const struct EtSolutions *s,
                                 size_t index,
                                 double *re,
                                 double *im,
                                 size_t len,
                                 size_t *written);

// Eigenvalue of solution `index`.
//
// # Safety
// `s` must be a live solutions handle; `re` and `im` must be valid.
enum EtStatus et_solution_lambda(const struct EtSolutions *s, size_t index, double *re, double *im);

// Largest generator magnitude at solution `index`, or a negative value
// when the point has no coordinates.
//
// # Safety
// `s` must be a live solutions handle and `residual` a valid pointer.
enum EtStatus et_solution_residual(const struct EtSolutions *s, size_t index, double *residual);

// # Safety
// `s` must be null or a handle not yet freed.
void et_solutions_free(struct EtSolutions *s);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void et_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ELIMTEMPLATES_H */
