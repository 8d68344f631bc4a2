#ifndef STRANDHOPF_H
#define STRANDHOPF_H

/* Generated by cbindgen from the strandhopf-ffi sources. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes returned by every fallible function.
 */
typedef enum ShStatus {
  SH_STATUS_OK = 0,
  SH_STATUS_NULL_POINTER = 1,
  SH_STATUS_INVALID_UTF8 = 2,
  SH_STATUS_PARSE_ERROR = 3,
  SH_STATUS_INVALID_GRAPH = 4,
  SH_STATUS_INVALID_ARGUMENT = 5,
  SH_STATUS_COMPUTATION_ERROR = 6,
  SH_STATUS_PANIC = 7,
} ShStatus;

/*
 Opaque 2-graph handle.
 */
typedef struct ShGraph ShGraph;

/*
 Opaque theory handle.
 */
typedef struct ShTheory ShTheory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL. The pointer stays
 valid until the next library call on the same thread.
 */
const char *sh_last_error_message(void);

/*
 Releases a string returned by the library. NULL is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void sh_string_free(char *s);

/*
 Parses and validates a graph document.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum ShStatus sh_graph_from_json(const char *json, struct ShGraph **out);

/*
 Releases a graph handle. NULL is ignored.

 # Safety
 `g` must come from this library and not have been freed.
 */
void sh_graph_free(struct ShGraph *g);

/*
 Serializes a graph as a pretty-printed document.

 # Safety
 `g` must be a live handle; `out` must be writable.
 */
enum ShStatus sh_graph_to_json(const struct ShGraph *g, char **out);

/*
 Checks a document against the axioms without failing on invalid graphs.
 A malformed document is a parse error.

 # Safety
 `json` must be a NUL-terminated string; `out_valid` must be writable.
 */
enum ShStatus sh_validate_json(const char *json, bool *out_valid);

/*
 Sizes of a graph. Any output pointer may be NULL.

 # Safety
 `g` must be a live handle; non-NULL outputs must be writable.
 */
enum ShStatus sh_graph_counts(const struct ShGraph *g,
                              uintptr_t *vertices,
                              uintptr_t *half_edges,
                              uintptr_t *strands,
                              uintptr_t *edges);

/*
 Order of the automorphism group; `ComputationError` if it exceeds 64 bits.

 # Safety
 `g` must be a live handle; `out` must be writable.
 */
enum ShStatus sh_graph_automorphism_count(const struct ShGraph *g, uint64_t *out);

/*
 Canonical code as a hex string; equal codes mean isomorphic graphs.

 # Safety
 `g` must be a live handle; `out` must be writable.
 */
enum ShStatus sh_graph_canonical_code(const struct ShGraph *g, char **out);

/*
 # Safety
 `a`, `b` must be live handles; `out` must be writable.
 */
enum ShStatus sh_graph_are_isomorphic(const struct ShGraph *a, const struct ShGraph *b, bool *out);

/*
 Contracts a comma-separated list of edges (`e1,e2` or half-edge labels).

 # Safety
 `g` must be a live handle, `edges` a NUL-terminated string, `out` writable.
 */
enum ShStatus sh_graph_contract_edges(const struct ShGraph *g,
                                      const char *edges,
                                      struct ShGraph **out);

/*
 The graph with all edges contracted.

 # Safety
 `g` must be a live handle; `out` must be writable.
 */
enum ShStatus sh_graph_residue(const struct ShGraph *g, struct ShGraph **out);

/*
 The graph with all edges removed.

 # Safety
 `g` must be a live handle; `out` must be writable.
 */
enum ShStatus sh_graph_skeleton(const struct ShGraph *g, struct ShGraph **out);

/*
 Coproduct terms as a JSON array of `{left, right, coefficient}` rows.

 # Safety
 `g` must be a live handle; `out` must be writable.
 */
enum ShStatus sh_graph_coproduct_json(const struct ShGraph *g, char **out);

/*
 Antipode terms as a JSON array of `{left, left_inverses?, coefficient}` rows.

 # Safety
 `g` must be a live handle; `out` must be writable.
 */
enum ShStatus sh_graph_antipode_json(const struct ShGraph *g, char **out);

/*
 One of the presets `gw4`, `phi4`, `quartic3`, `bgr`.

 # Safety
 `name` must be a NUL-terminated string; `out` must be writable.
 */
enum ShStatus sh_theory_preset(const char *name, struct ShTheory **out);

/*
 Parses a theory document.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum ShStatus sh_theory_from_json(const char *json, struct ShTheory **out);

/*
 Releases a theory handle. NULL is ignored.

 # Safety
 `t` must come from this library and not have been freed.
 */
void sh_theory_free(struct ShTheory *t);

/*
 Superficial degree of divergence as an exact rational string (`"p"` or `"p/q"`).

 # Safety
 `t`, `g` must be live handles; `out` must be writable.
 */
enum ShStatus sh_superficial_degree(const struct ShTheory *t, const struct ShGraph *g, char **out);

/*
 Per-component power-counting report as JSON.

 # Safety
 `t`, `g` must be live handles; `out` must be writable.
 */
enum ShStatus sh_classify_json(const struct ShTheory *t, const struct ShGraph *g, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STRANDHOPF_H */
