/* C ABI for the hitset library.
 *
 * Link against the `hitset_ffi` static or shared library produced by
 * `cargo build -p hitset-ffi --release`.
 *
 * Conventions:
 *  - Every fallible function returns an hs_status code; results travel
 *    through out-parameters.
 *  - Handles are created by the *_build / *_new functions and released by
 *    the matching *_free. Passing NULL to a free function is a no-op;
 *    passing NULL anywhere else yields HS_ERR_NULL_ARGUMENT.
 *  - Handles are not thread-safe; guard shared use externally.
 */

#ifndef HITSET_H
#define HITSET_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hs_status {
  HS_OK = 0,
  HS_ERR_NULL_ARGUMENT = 1,   /* a required pointer was NULL */
  HS_ERR_INVALID_INPUT = 2,   /* empty/duplicate/non-finite points, bad rect */
  HS_ERR_INFEASIBLE = 3,      /* the rectangle contains no input point */
  HS_ERR_VALIDATION = 4,      /* a structural tree check failed */
  HS_ERR_BUFFER_TOO_SMALL = 5,
  HS_ERR_INTERNAL = 6
} hs_status;

/* Opaque handle to a balanced box-decomposition tree over a point set. */
typedef struct HsTree HsTree;

/* Opaque handle to an online hitting-set instance over a tree. */
typedef struct HsHitter HsHitter;

/* Builds a tree over n points given as interleaved coordinates
 * xy = {x0, y0, x1, y1, ...} (2*n doubles). On HS_OK, *out owns the tree. */
int hs_tree_build(const double *xy, size_t n, HsTree **out);

void hs_tree_free(HsTree *tree);

int hs_tree_depth(const HsTree *tree, size_t *out);

int hs_tree_node_count(const HsTree *tree, size_t *out);

/* Runs the structural validator over the whole tree. */
int hs_tree_validate(const HsTree *tree);

/* Creates an online hitter. The hitter keeps its own reference to the
 * tree, so the tree handle may be freed first. */
int hs_hitter_new(const HsTree *tree, HsHitter **out);

void hs_hitter_free(HsHitter *hitter);

/* Processes one axis-aligned rectangle (closed; must satisfy
 * x_lo < x_hi and y_lo < y_hi). Afterwards the rectangle is hit by the
 * current set. HS_ERR_INFEASIBLE means it contains no input point; the
 * state is then unchanged. */
int hs_hitter_process_rect(HsHitter *hitter, double x_lo, double y_lo,
                           double x_hi, double y_hi);

/* Current hitting-set size (also the capacity hs_hitter_points needs). */
int hs_hitter_size(const HsHitter *hitter, size_t *out);

/* Copies the hitting set, as indices into the original point array in
 * insertion order, into buf (capacity cap). *written receives the count. */
int hs_hitter_points(const HsHitter *hitter, uint32_t *buf, size_t cap,
                     size_t *written);

/* Largest number of points any single processed rectangle added. */
int hs_hitter_max_points_per_round(const HsHitter *hitter, size_t *out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HITSET_H */
