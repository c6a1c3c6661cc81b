#ifndef RGGSPEC_H
#define RGGSPEC_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of an SIS run.
 */
typedef enum RggOutcome {
  RGG_OUTCOME_DIED_OUT = 0,
  RGG_OUTCOME_PERSISTED = 1,
  RGG_OUTCOME_HORIZON_REACHED = 2,
} RggOutcome;

/**
 * Status code returned by every fallible function.
 */
typedef enum RggStatus {
  RGG_STATUS_OK = 0,
  RGG_STATUS_NULL_POINTER = 1,
  RGG_STATUS_INVALID_PARAMETER = 2,
  RGG_STATUS_OVERFLOW = 3,
  RGG_STATUS_SIZE_LIMIT = 4,
  RGG_STATUS_CONVERGENCE = 5,
  RGG_STATUS_UNSUPPORTED = 6,
  RGG_STATUS_INTERNAL = 7,
} RggStatus;

/**
 * Opaque random geometric graph handle.
 */
typedef struct RggGraph RggGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the most recent error message on this thread into `buf`
 * (NUL-terminated, truncated to `len`). Returns the full message length in
 * bytes, excluding the terminator.
 */
uintptr_t rgg_last_error(char *buf, uintptr_t len);

/**
 * Builds an RGG on the unit torus and stores the handle in `out`.
 */
enum RggStatus rgg_graph_build(uintptr_t n,
                               uintptr_t d,
                               double r,
                               uint64_t seed,
                               struct RggGraph **out);

/**
 * Frees a graph handle. A null handle is a no-op.
 */
void rgg_graph_free(struct RggGraph *g);

/**
 * Number of nodes; 0 for a null handle.
 */
uintptr_t rgg_graph_num_nodes(const struct RggGraph *g);

/**
 * Number of undirected edges; 0 for a null handle.
 */
uintptr_t rgg_graph_num_edges(const struct RggGraph *g);

enum RggStatus rgg_graph_mean_degree(const struct RggGraph *g, double *out);

enum RggStatus rgg_graph_count_triangles(const struct RggGraph *g, uint64_t *out);

/**
 * Spectral moments `m_1..m_k_max` by exact walk counting, written to
 * `out[0..k_max]`.
 */
enum RggStatus rgg_graph_moments(const struct RggGraph *g, uintptr_t k_max, double *out);

/**
 * Adjacency spectral radius by power iteration.
 */
enum RggStatus rgg_graph_spectral_radius(const struct RggGraph *g, double tol, double *out);

/**
 * Expected degree `n V_d r^d`.
 */
enum RggStatus rgg_expected_degree(uintptr_t n, uintptr_t d, double r, double *out);

/**
 * Analytic expected moment for the one-dimensional model.
 */
enum RggStatus rgg_expected_moment_1d(uintptr_t n, double r, uintptr_t k, double *out);

/**
 * Two-disk lens area at center distance `rho`, radius `r`.
 */
enum RggStatus rgg_lens_area(double rho, double r, double *out);

/**
 * Monte Carlo chain-polytope volume: estimate and standard error.
 */
enum RggStatus rgg_estimate_volume(uintptr_t k,
                                   uintptr_t samples,
                                   uint64_t seed,
                                   double *out_estimate,
                                   double *out_std_error);

/**
 * Spectral-radius bound `c_d n r^d`.
 */
enum RggStatus rgg_lambda_max_bound(uintptr_t n, double r, uintptr_t d, double c_d, double *out);

/**
 * Largest radius keeping the bound below the epidemic threshold
 * `delta / beta`.
 */
enum RggStatus rgg_design_radius(uintptr_t n,
                                 uintptr_t d,
                                 double beta,
                                 double delta,
                                 double c_d,
                                 double *out);

/**
 * Runs the SIS dynamics from a seeded initial infection. Writes the outcome
 * and, when the epidemic died out, the step at which it did (-1 otherwise).
 */
enum RggStatus rgg_sis_simulate(const struct RggGraph *g,
                                double beta,
                                double delta,
                                double p0_level,
                                uintptr_t steps,
                                uint64_t seed,
                                enum RggOutcome *out_outcome,
                                int64_t *out_die_out_step);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RGGSPEC_H */
