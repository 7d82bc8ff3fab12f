#ifndef QKERNEL_H
#define QKERNEL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QkStatus {
  QK_STATUS_OK = 0,
  QK_STATUS_NULL_POINTER = 1,
  QK_STATUS_INVALID_UTF8 = 2,
  QK_STATUS_PARSE = 3,
  QK_STATUS_INVALID_ARGUMENT = 4,
  QK_STATUS_BUDGET_EXCEEDED = 5,
  QK_STATUS_NOT_SINK_FREE = 6,
  QK_STATUS_NOT_KERNEL_PERFECT = 7,
  QK_STATUS_NOT_QUASI_KERNEL = 8,
  // A construction failed its own guarantee.
  QK_STATUS_POSTCONDITION = 9,
  // A Rust panic was caught at the boundary.
  QK_STATUS_INTERNAL = 10,
} QkStatus;

typedef enum QkVariant {
  QK_VARIANT_SMALL = 0,
  QK_VARIANT_SOURCES = 1,
  QK_VARIANT_LARGE = 2,
  QK_VARIANT_SHARP = 3,
} QkVariant;

// Opaque digraph handle.
typedef struct QkDigraph QkDigraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the calling thread's last failure; empty if none. Valid until
// the thread's next failing call.
const char *qk_last_error(void);

// Library version, a static string.
const char *qk_version(void);

// Parses the text (`n` then `u v` lines) or JSON digraph format.
//
// # Safety
// `text` must be a nul-terminated string; `out_digraph` must be writable.
enum QkStatus qk_digraph_parse(const char *text, struct QkDigraph **out_digraph);

// Builds a digraph from `arc_count` pairs laid out as
// `tails_heads[2i] -> tails_heads[2i+1]`.
//
// # Safety
// `tails_heads` must point to `2 * arc_count` readable values (it may be
// null when `arc_count` is 0); `out_digraph` must be writable.
enum QkStatus qk_digraph_from_arcs(size_t n,
                                   const uint32_t *tails_heads,
                                   size_t arc_count,
                                   struct QkDigraph **out_digraph);

// Releases a handle; null is ignored.
//
// # Safety
// `d` must come from this library and not have been freed.
void qk_digraph_free(struct QkDigraph *d);

// Vertex count; 0 for a null handle.
//
// # Safety
// `d` must be null or a live handle.
size_t qk_digraph_vertex_count(const struct QkDigraph *d);

// Arc count; 0 for a null handle.
//
// # Safety
// `d` must be null or a live handle.
size_t qk_digraph_arc_count(const struct QkDigraph *d);

// Text serialization; free the result with `qk_string_free`.
//
// # Safety
// `d` must be a live handle; `out_text` must be writable.
enum QkStatus qk_digraph_serialize(const struct QkDigraph *d, char **out_text);

// # Safety
// `s` must be null or a string returned by this library.
void qk_string_free(char *s);

// Minimum-size quasi-kernel.
//
// # Safety
// `d` must be a live handle; outputs must be writable.
enum QkStatus qk_min_quasi_kernel(const struct QkDigraph *d, uint64_t *out_set, size_t *out_size);

// Quasi-kernel maximising `|N⁻[Q]|`; the objective is that size.
//
// # Safety
// As `qk_min_quasi_kernel`.
enum QkStatus qk_max_large_quasi_kernel(const struct QkDigraph *d,
                                        uint64_t *out_set,
                                        size_t *out_objective);

// Quasi-kernel maximising `|Q| + 2|N⁻(Q)|`; the objective is that value.
//
// # Safety
// As `qk_min_quasi_kernel`.
enum QkStatus qk_max_sharp_quasi_kernel(const struct QkDigraph *d,
                                        uint64_t *out_set,
                                        size_t *out_objective);

// Minimum kernel; `*out_found` is false (and `*out_set` 0) when there is
// none.
//
// # Safety
// As `qk_min_quasi_kernel`.
enum QkStatus qk_find_kernel(const struct QkDigraph *d, uint64_t *out_set, bool *out_found);

// # Safety
// `d` must be a live handle; `out_result` must be writable.
enum QkStatus qk_is_quasi_kernel(const struct QkDigraph *d, uint64_t set, bool *out_result);

// Kernel-perfect number and a certifying partition. `out_parts` receives
// `*out_k` bitmasks and must hold `parts_capacity >= vertex count` entries.
//
// # Safety
// `d` must be a live handle; `out_parts` must point to `parts_capacity`
// writable values; `out_k` must be writable.
enum QkStatus qk_kp_number(const struct QkDigraph *d,
                           size_t *out_k,
                           uint64_t *out_parts,
                           size_t parts_capacity);

// Checks one conjecture variant at `alpha = p/q` with exact arithmetic.
// `small` uses the sink-free version and rejects digraphs with sinks.
//
// # Safety
// `d` must be a live handle; outputs must be writable.
enum QkStatus qk_check(const struct QkDigraph *d,
                       enum QkVariant variant,
                       uint64_t p,
                       uint64_t q,
                       bool *out_pass,
                       size_t *out_objective);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QKERNEL_H */
