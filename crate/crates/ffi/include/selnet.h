#ifndef SELNET_H
#define SELNET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum SelnetStatus {
  SELNET_STATUS_OK = 0,
  SELNET_STATUS_NULL_POINTER = 1,
  SELNET_STATUS_INVALID_ARGUMENT = 2,
  SELNET_STATUS_PARSE = 3,
  SELNET_STATUS_SEMANTIC = 4,
  SELNET_STATUS_CONFIG = 5,
  SELNET_STATUS_SHAPE = 6,
  SELNET_STATUS_CONTRACT = 7,
  SELNET_STATUS_IO = 8,
  SELNET_STATUS_PANIC = 9,
} SelnetStatus;

// Solver outcomes.
typedef enum SelnetVerdict {
  SELNET_VERDICT_SAT = 10,
  SELNET_VERDICT_UNSAT = 20,
  SELNET_VERDICT_UNKNOWN = 0,
} SelnetVerdict;

// How recursive constructions bottom out.
typedef enum SelnetBase {
  // One selector gate for inputs up to `direct_threshold`.
  SELNET_BASE_DIRECT = 0,
  // Only the size-4 sorter base case.
  SELNET_BASE_PURE = 1,
  // No substitution at all.
  SELNET_BASE_RAW = 2,
} SelnetBase;

// An encoded CNF formula.
typedef struct SelnetFormula SelnetFormula;

// A single at-most constraint whose bound can be tightened later.
typedef struct SelnetHandle SelnetHandle;

// A CNF instance with cardinality constraints.
typedef struct SelnetInstance SelnetInstance;

// Encoder options; start from `selnet_options_default()`.
typedef struct SelnetOptions {
  // A `SelnetBase` value.
  uint32_t base;
  size_t direct_threshold;
  // Largest input accepted by the `direct` method.
  size_t direct_limit;
  // Largest clause count of one naive encoding.
  uint64_t naive_limit;
} SelnetOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Valid until
// the next call into the library on the same thread.
const char *selnet_last_error(void);

// Library version as a static string.
const char *selnet_version(void);

struct SelnetOptions selnet_options_default(void);

// Frees a string returned by the library. NULL is ignored.
void selnet_string_free(char *s);

// Empty instance over variables 1..=var_count.
enum SelnetStatus selnet_instance_new(uint32_t var_count, struct SelnetInstance **out);

// Parses CNFP text.
enum SelnetStatus selnet_instance_parse(const char *text, struct SelnetInstance **out);

void selnet_instance_free(struct SelnetInstance *inst);

// Appends a clause of `len` DIMACS literals.
enum SelnetStatus selnet_instance_add_clause(struct SelnetInstance *inst,
                                             const int64_t *lits,
                                             size_t len);

// Appends `sum(lits) rel k` where `rel` is one of "<", "<=", "=", ">=", ">".
enum SelnetStatus selnet_instance_add_constraint(struct SelnetInstance *inst,
                                                 const int64_t *lits,
                                                 size_t len,
                                                 const char *rel,
                                                 uint64_t k);

// Encodes the instance. `method` is one of "4oe", "4wise", "2oe", "pcn",
// "direct", "naive"; `opts` may be NULL for defaults.
enum SelnetStatus selnet_encode(const struct SelnetInstance *inst,
                                const char *method,
                                const struct SelnetOptions *opts,
                                struct SelnetFormula **out);

void selnet_formula_free(struct SelnetFormula *f);

// Number of variables, or 0 for NULL.
uint32_t selnet_formula_var_count(const struct SelnetFormula *f);

// Number of clauses, or 0 for NULL.
size_t selnet_formula_clause_count(const struct SelnetFormula *f);

// Borrows clause `index`: `*lits` points at `*len` literals owned by the
// formula and followed by a terminating 0.
enum SelnetStatus selnet_formula_clause(const struct SelnetFormula *f,
                                        size_t index,
                                        const int64_t **lits,
                                        size_t *len);

// DIMACS text of the formula; free with `selnet_string_free`.
enum SelnetStatus selnet_formula_dimacs(const struct SelnetFormula *f, char **out);

// Solves with the built-in DPLL solver (`budget` decisions, 0 for none).
// When `model` is non-NULL and the verdict is SAT, writes `var_count + 1`
// bytes: `model[v]` is 1 if variable v is true; `model[0]` is unused.
enum SelnetStatus selnet_formula_solve(const struct SelnetFormula *f,
                                       uint64_t budget,
                                       enum SelnetVerdict *verdict,
                                       uint8_t *model);

// Encodes `sum(lits) < bound` over variables numbered up to `var_count`,
// keeping the network outputs so the bound can be tightened later.
enum SelnetStatus selnet_handle_new(uint32_t var_count,
                                    const int64_t *lits,
                                    size_t len,
                                    size_t bound,
                                    const char *method,
                                    const struct SelnetOptions *opts,
                                    struct SelnetHandle **out);

void selnet_handle_free(struct SelnetHandle *h);

// Current strict bound, or 0 for NULL.
size_t selnet_handle_bound(const struct SelnetHandle *h);

// Tightens the bound to `sum < k`. Writes the added unit literal to
// `*unit`, or 0 when the output is constant and nothing was added.
enum SelnetStatus selnet_handle_strengthen(struct SelnetHandle *h, size_t k, int64_t *unit);

// Output literal y_i (1-based) of the handle's network, or 0 when that
// output is constant.
enum SelnetStatus selnet_handle_output(const struct SelnetHandle *h, size_t i, int64_t *lit);

// Snapshot of the handle's current formula as a new formula object.
enum SelnetStatus selnet_handle_formula(const struct SelnetHandle *h, struct SelnetFormula **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SELNET_H */
