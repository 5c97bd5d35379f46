#ifndef MINFB_H
#define MINFB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum MinfbStatus {
  /**
   * Success; for solve calls this means a blocker was found.
   */
  MinfbOk = 0,
  /**
   * The instance has no solution within the budget.
   */
  MinfbNoSolution = 1,
  MinfbInputError = 2,
  MinfbResourceError = 3,
  MinfbNullPointer = 4,
  MinfbInvalidUtf8 = 5,
  MinfbPanic = 6,
} MinfbStatus;

/**
 * Opaque instance handle.
 */
typedef struct MinfbGraph MinfbGraph;

/**
 * Opaque solve-result handle.
 */
typedef struct MinfbSolution MinfbSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent error on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *minfb_last_error(void);

/**
 * Parses the graph text format (`p ndfas ...` / `a ...` lines).
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MinfbStatus minfb_graph_parse(const char *text, struct MinfbGraph **out);

/**
 * Parses the JSON constraint-system document; the embedded budget is
 * available through `minfb_graph_embedded_k`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MinfbStatus minfb_graph_parse_system(const char *json, struct MinfbGraph **out);

/**
 * # Safety
 * `g` must come from a parse call and not have been freed.
 */
void minfb_graph_free(struct MinfbGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle.
 */
uint32_t minfb_graph_vertex_count(const struct MinfbGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle.
 */
uint32_t minfb_graph_arc_count(const struct MinfbGraph *g);

/**
 * Budget embedded in a constraint-system input; `u32::MAX` when absent.
 *
 * # Safety
 * `g` must be a live graph handle.
 */
uint32_t minfb_graph_embedded_k(const struct MinfbGraph *g);

/**
 * Solves the instance. `algorithm` may be null for automatic routing or one
 * of the solver names (`oracle`, `td-k`, `pm1-wminus`, `pm1-wplus`,
 * `dp-tw-wminus`, `dp-tw-wplus`, `dp-td`, `skew-nonzero`, `trivial`).
 * On `MinfbOk` or `MinfbNoSolution`, `out` receives a solution handle.
 *
 * # Safety
 * `g` must be a live graph handle, `out` a valid pointer, `algorithm` null
 * or NUL-terminated.
 */
enum MinfbStatus minfb_solve(const struct MinfbGraph *g,
                             uint32_t k,
                             const char *algorithm,
                             bool minimum,
                             struct MinfbSolution **out);

/**
 * # Safety
 * `sol` must be a live solution handle.
 */
bool minfb_solution_found(const struct MinfbSolution *sol);

/**
 * # Safety
 * `sol` must be a live solution handle.
 */
uintptr_t minfb_solution_size(const struct MinfbSolution *sol);

/**
 * Copies up to `cap` arc ids into `buf`; returns how many were written.
 *
 * # Safety
 * `sol` must be live; `buf` must point to at least `cap` u32 slots.
 */
uintptr_t minfb_solution_arcs(const struct MinfbSolution *sol, uint32_t *buf, uintptr_t cap);

/**
 * Name of the algorithm that produced the solution. Valid while the
 * solution handle lives.
 *
 * # Safety
 * `sol` must be a live solution handle.
 */
const char *minfb_solution_algorithm(const struct MinfbSolution *sol);

/**
 * # Safety
 * `sol` must come from `minfb_solve` and not have been freed.
 */
void minfb_solution_free(struct MinfbSolution *sol);

/**
 * Checks a proposed deletion set: `out_valid` is set to whether it has size
 * at most `k` and leaves no negative cycle.
 *
 * # Safety
 * `g` must be live; `ids` must point to `len` u32 values; `out_valid` must
 * be a valid pointer.
 */
enum MinfbStatus minfb_verify(const struct MinfbGraph *g,
                              const uint32_t *ids,
                              uintptr_t len,
                              uint32_t k,
                              bool *out_valid);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MINFB_H */
