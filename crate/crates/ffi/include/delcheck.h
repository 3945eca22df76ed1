#ifndef DELCHECK_H
#define DELCHECK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Return codes. Zero and positive values are verdicts, negative values
// are errors.
typedef enum DelStatus {
  DEL_STATUS_OK = 0,
  // Negative verdict: counterexample found, not an obstruction, or
  // no morphism exists.
  DEL_STATUS_NO = 1,
  // The search budget ran out.
  DEL_STATUS_LIMIT = 3,
  DEL_STATUS_NULL_ARGUMENT = -1,
  DEL_STATUS_INVALID_UTF8 = -2,
  DEL_STATUS_PARSE = -3,
  DEL_STATUS_SPEC = -4,
  DEL_STATUS_MODEL = -5,
  DEL_STATUS_AGENT_OUT_OF_RANGE = -6,
  DEL_STATUS_BUDGET = -7,
  DEL_STATUS_JSON = -8,
  DEL_STATUS_IO = -9,
  DEL_STATUS_PANIC = -10,
} DelStatus;

// Opaque formula.
typedef struct DelFormula DelFormula;

// Opaque simplicial model.
typedef struct DelModel DelModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty if none. The
// pointer stays valid until the next failing call on the same thread.
const char *del_last_error(void);

// Frees a string returned by this library.
//
// # Safety
// `s` must come from this library and not be freed twice.
void del_string_free(char *s);

// Builds a model from a spec such as `"I[is]"`, `"sa:1"` or `"initial"`.
// `inputs` may be null to use the default value set; `k` of 0 means
// unset.
//
// # Safety
// `spec` must be a NUL-terminated string, `inputs` must point to
// `inputs_len` values when non-null, and `out` must be writable.
enum DelStatus del_model_build(const char *spec,
                               uint32_t n,
                               const int64_t *inputs,
                               size_t inputs_len,
                               uint32_t k,
                               struct DelModel **out);

// Reads a model from its JSON export.
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum DelStatus del_model_from_json(const char *json, struct DelModel **out);

// Writes the model JSON to `*out`; free it with [`del_string_free`].
//
// # Safety
// `model` must be a live handle and `out` writable.
enum DelStatus del_model_to_json(const struct DelModel *model, char **out);

// Number of facets, or 0 for a null handle.
//
// # Safety
// `model` must be null or a live handle.
size_t del_model_facet_count(const struct DelModel *model);

// Dimension `n` of the model, or 0 for a null handle.
//
// # Safety
// `model` must be null or a live handle.
uint32_t del_model_dim(const struct DelModel *model);

// # Safety
// `model` must be null or a handle not yet freed.
void del_model_free(struct DelModel *model);

// Parses a formula in the text grammar.
//
// # Safety
// `text` must be a NUL-terminated string and `out` writable.
enum DelStatus del_formula_parse(const char *text, struct DelFormula **out);

// Generates an obstruction formula: `"bc"`, `"nishida:k"` or
// `"adversary"`. The adversary generator reads `adversary_json` (same
// format as adversary files) or uses the wait-free adversary when it is
// null.
//
// # Safety
// `generator` must be a NUL-terminated string, `adversary_json` null or
// NUL-terminated, and `out` writable.
enum DelStatus del_formula_generate(const char *generator,
                                    uint32_t n,
                                    const char *adversary_json,
                                    struct DelFormula **out);

// Writes the formula text to `*out`; free it with [`del_string_free`].
//
// # Safety
// `formula` must be a live handle and `out` writable.
enum DelStatus del_formula_to_string(const struct DelFormula *formula, char **out);

// 1 if the formula is positive, 0 otherwise (including null).
//
// # Safety
// `formula` must be null or a live handle.
int32_t del_formula_is_positive(const struct DelFormula *formula);

// # Safety
// `formula` must be null or a handle not yet freed.
void del_formula_free(struct DelFormula *formula);

// Validity check. Returns `Ok` if the formula holds at every facet,
// otherwise `No` with the first counterexample facet id written to
// `counterexample` (which may be null).
//
// # Safety
// Handles must be live; `counterexample` null or writable.
enum DelStatus del_check(const struct DelModel *model,
                         const struct DelFormula *formula,
                         uint32_t *counterexample);

// Satisfaction at one facet: `Ok` if it holds, `No` if not.
//
// # Safety
// Handles must be live.
enum DelStatus del_satisfies(const struct DelModel *model,
                             uint32_t facet,
                             const struct DelFormula *formula);

// Obstruction check: `Ok` if the formula is positive, valid in `task`
// and falsified in `protocol`; `No` otherwise.
//
// # Safety
// Handles must be live.
enum DelStatus del_verify_obstruction(const struct DelModel *task,
                                      const struct DelModel *protocol,
                                      const struct DelFormula *formula);

// Morphism search from `protocol` to `task`: `Ok` when solvable, `No`
// when provably unsolvable, `Limit` when `budget` nodes were explored.
// The node count is written to `explored` when non-null.
//
// # Safety
// Handles must be live; `explored` null or writable.
enum DelStatus del_solve(const struct DelModel *protocol,
                         const struct DelModel *task,
                         uint64_t budget,
                         uint64_t *explored);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DELCHECK_H */
