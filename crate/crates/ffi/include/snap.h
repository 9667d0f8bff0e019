#ifndef SNAP_H
#define SNAP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  SNAP_STATUS_OK = 0,
  SNAP_STATUS_NULL_POINTER = 1,
  SNAP_STATUS_INVALID_ARGUMENT = 2,
  SNAP_STATUS_PARSE = 3,
  SNAP_STATUS_RUNTIME = 4,
  SNAP_STATUS_PANIC = 5,
} SnapStatus;

/**
 * Parsed graph with vertex names.
 */
typedef struct SnapGraph SnapGraph;

/**
 * Outcome of one discovery run.
 */
typedef struct SnapResult SnapResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or null. The pointer stays valid until
 * the next failing call on this thread.
 */
const char *snap_last_error(void);

/**
 * Parses an edge-list document into a new graph handle.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` valid for writes.
 */
SnapStatus snap_graph_parse(const char *text, SnapGraph **out);

/**
 * # Safety
 * `graph` must come from `snap_graph_parse` and not be freed twice.
 */
void snap_graph_free(SnapGraph *graph);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t snap_graph_n_vertices(const SnapGraph *graph);

/**
 * Whether `x` and `y` are d-separated given the comma-separated `given`
 * names in a directed graph.
 *
 * # Safety
 * String arguments must be nul-terminated; `given` may be null.
 */
SnapStatus snap_dsep(const SnapGraph *graph,
                     const char *x,
                     const char *y,
                     const char *given,
                     bool *out);

/**
 * Runs discovery with the d-separation oracle of the directed graph `dag`.
 * `algo` is `pc`, `snap-inf`, `snap-k:K` or `snap-k-pc:K`; `targets` is a
 * comma-separated name list.
 *
 * # Safety
 * String arguments must be nul-terminated and `out` valid for writes.
 */
SnapStatus snap_discover_oracle(const SnapGraph *dag,
                                const char *algo,
                                const char *targets,
                                SnapResult **out);

/**
 * Runs discovery on CSV data with a header row. `tester` is `fisher-z` or
 * `chi-sq`.
 *
 * # Safety
 * String arguments must be nul-terminated and `out` valid for writes.
 */
SnapStatus snap_discover_csv(const char *csv,
                             const char *tester,
                             double alpha,
                             const char *algo,
                             const char *targets,
                             SnapResult **out);

/**
 * # Safety
 * `result` must come from a discovery call and not be freed twice.
 */
void snap_result_free(SnapResult *result);

/**
 * Distinct CI tests performed.
 *
 * # Safety
 * `result` must be a live handle and `out` valid for writes.
 */
SnapStatus snap_result_total_tests(const SnapResult *result, uint64_t *out);

/**
 * Distinct CI tests with a conditioning set of size `order`.
 *
 * # Safety
 * `result` must be a live handle and `out` valid for writes.
 */
SnapStatus snap_result_tests_at_order(const SnapResult *result, size_t order, uint64_t *out);

/**
 * Size of the retained vertex set.
 *
 * # Safety
 * `result` must be a live handle and `out` valid for writes.
 */
SnapStatus snap_result_n_remaining(const SnapResult *result, size_t *out);

/**
 * Learned graph as an edge-list document. Release with [`snap_string_free`].
 *
 * # Safety
 * `result` must be a live handle and `out` valid for writes.
 */
SnapStatus snap_result_edge_list(const SnapResult *result, char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void snap_string_free(char *s);

/**
 * Expected possible-ancestor count of `t` random targets among `n` vertices.
 *
 * # Safety
 * `out` must be valid for writes.
 */
SnapStatus snap_expected_possible_ancestors(uint64_t n, uint64_t t, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SNAP_H */
