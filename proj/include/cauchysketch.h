/* cauchysketch: dimension reduction in the l1 norm with Cauchy random
 * projections.
 *
 * C API of the shared library. All functions that can fail return a
 * cs_status; CS_OK is zero. A short description of the most recent failure
 * on the calling thread is available from cs_last_error(). Objects returned
 * through cs_matrix/cs_sketch handles are immutable and must be released
 * with the matching *_free call. Handles may be shared across threads.
 *
 * Table-producing calls write CSV to a path; pass "-" to stream to stdout.
 */

#ifndef CAUCHYSKETCH_H
#define CAUCHYSKETCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CS_API __declspec(dllexport)
#else
#define CS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cs_status {
    CS_OK = 0,
    CS_ERR_IO = 1,
    CS_ERR_PARSE = 2,
    CS_ERR_RAGGED_ROWS = 3,
    CS_ERR_DIMENSION = 4,      /* length/dimension mismatch */
    CS_ERR_INDEX = 5,          /* index out of range */
    CS_ERR_BAD_MAGIC = 6,      /* not a sketch file */
    CS_ERR_VERSION = 7,        /* format or generator version mismatch */
    CS_ERR_CHECKSUM = 8,       /* truncated or corrupt sketch file */
    CS_ERR_INVALID_ARGUMENT = 9,
    CS_ERR_ESTIMATOR_MISMATCH = 10, /* estimator vs sketch generator */
    CS_ERR_NO_CONVERGENCE = 11,
    CS_ERR_UNKNOWN = 12,
} cs_status;

typedef enum cs_generator {
    CS_GEN_CAUCHY = 0,
    CS_GEN_NORMAL = 1,
    CS_GEN_SPARSE = 2,
} cs_generator;

typedef enum cs_estimator {
    CS_EST_ME = 0,     /* sample median */
    CS_EST_ME_C = 1,   /* bias-corrected median (odd k >= 3) */
    CS_EST_GM_C = 2,   /* bias-corrected geometric mean (k >= 2) */
    CS_EST_FRAC = 3,   /* fractional moment, needs lambda */
    CS_EST_MLE = 4,    /* maximum likelihood */
    CS_EST_MLE_C = 5,  /* bias-corrected MLE (k >= 2) */
    CS_EST_OR = 6,     /* interquartile quantile estimator (k >= 4) */
    CS_EST_L2SQ = 7,   /* mean of squares, for normal/sparse sketches */
} cs_estimator;

typedef struct cs_matrix cs_matrix;
typedef struct cs_sketch cs_sketch;

CS_API const char* cs_version(void);
CS_API const char* cs_status_name(cs_status status);
CS_API const char* cs_last_error(void);

/* ---- data matrices ---- */

CS_API cs_status cs_matrix_load_csv(const char* path, char delimiter,
                                    int skip_header, cs_matrix** out);
CS_API cs_status cs_matrix_from_values(size_t n, size_t d,
                                       const double* values, cs_matrix** out);
CS_API void cs_matrix_free(cs_matrix* m);
CS_API size_t cs_matrix_rows(const cs_matrix* m);
CS_API size_t cs_matrix_cols(const cs_matrix* m);
/* Exact l1 distance between rows i and j. */
CS_API cs_status cs_matrix_l1_distance(const cs_matrix* m, size_t i, size_t j,
                                       double* out);

/* ---- projection and sketch files ---- */

/* sparse_s is only read for CS_GEN_SPARSE (must be >= 1). */
CS_API cs_status cs_project(const cs_matrix* m, uint64_t seed, size_t k,
                            cs_generator generator, double sparse_s,
                            cs_sketch** out);
CS_API cs_status cs_sketch_write(const cs_sketch* s, const char* path);
CS_API cs_status cs_sketch_read(const char* path, cs_sketch** out);
CS_API void cs_sketch_free(cs_sketch* s);
CS_API size_t cs_sketch_rows(const cs_sketch* s);
CS_API size_t cs_sketch_dim(const cs_sketch* s);        /* k */
CS_API size_t cs_sketch_source_dim(const cs_sketch* s); /* D */
CS_API uint64_t cs_sketch_seed(const cs_sketch* s);
CS_API cs_generator cs_sketch_generator(const cs_sketch* s);
CS_API double cs_sketch_generator_s(const cs_sketch* s);

/* ---- distance estimation ---- */

/* Estimate the l1 (or squared l2) distance between sketch rows i and j.
 * flagged is set to 1 when an all-zero sample forced the 0 convention
 * (MLE family); it may be NULL. */
CS_API cs_status cs_estimate_pair(const cs_sketch* s, size_t i, size_t j,
                                  cs_estimator estimator, double lambda,
                                  double* value, int* flagged);
/* Same estimators applied to a raw sample of k projected differences. */
CS_API cs_status cs_estimate_samples(const double* x, size_t k,
                                     cs_estimator estimator, double lambda,
                                     double* value, int* flagged);
/* All pairs (or the two-column index list in pairs_path) to CSV. */
CS_API cs_status cs_pairwise_csv(const cs_sketch* s, cs_estimator estimator,
                                 double lambda, const char* pairs_path,
                                 const char* out_path,
                                 const char* provenance);

/* ---- sample-size planning ---- */

/* binding (may be NULL): 0 = JL formula, 1 = the pi^2/(1.5 eps) floor. */
CS_API cs_status cs_plan_l1(size_t n, double eps, double delta, size_t* k,
                            int* binding);
CS_API cs_status cs_plan_l2(size_t n, double eps, double delta, size_t* k);

/* ---- tail bounds ---- */

typedef struct cs_gm_bounds {
    double eps;
    double markov_upper, markov_lower; /* optimal-t Markov bounds */
    double t_upper, t_lower;
    int markov_lower_valid;            /* k >= pi^2/(8 eps) */
    double exp_upper, exp_lower;       /* exp(-k eps^2/(c(1+eps))) */
    int exp_lower_valid;               /* k >= pi^2/(1.5 eps) */
} cs_gm_bounds;

/* Bounds for the bias-corrected geometric mean; exp_constant <= 0 picks the
 * default 8. */
CS_API cs_status cs_gm_tail_bounds(size_t k, double eps, double exp_constant,
                                   cs_gm_bounds* out);

typedef struct cs_mle_bounds {
    double eps;
    double alpha, beta;  /* fitted gamma/IG parameters at d = 1 */
    double gamma_upper, gamma_lower;            /* exact gamma tails */
    double gamma_chern_upper, gamma_chern_lower;
    double ig_upper, ig_lower;                  /* exact IG tails */
    double ig_chern_upper, ig_chern_lower, ig_chern_symmetric;
    double normal_upper, normal_lower;          /* normal approximation */
} cs_mle_bounds;

/* Approximation tails and Chernoff bounds for the bias-corrected MLE. */
CS_API cs_status cs_mle_tail_bounds(size_t k, double eps, cs_mle_bounds* out);

/* ---- bias table and special values ---- */

/* b_me(k) for odd k >= 3; the expectation of the sample median of k
 * standard half-Cauchy variables. */
CS_API cs_status cs_median_bias_factor(size_t k, double* out);
CS_API cs_status cs_bias_table_csv(size_t max_k, const char* out_path,
                                   const char* provenance);
CS_API double cs_std_normal_cdf(double z);

/* ---- Monte Carlo simulation ---- */

/* Moment summary (empirical vs theory) for one estimator at (k, d). */
CS_API cs_status cs_sim_moments_csv(cs_estimator estimator, double lambda,
                                    size_t k, double d, uint64_t replicates,
                                    uint64_t seed, const char* out_path,
                                    const char* provenance);
/* Empirical tail probabilities over an eps grid plus matching bounds. */
CS_API cs_status cs_sim_tail_csv(cs_estimator estimator, double lambda,
                                 size_t k, double d, uint64_t replicates,
                                 uint64_t seed, const double* eps_grid,
                                 size_t grid_len, const char* out_path,
                                 const char* provenance);
/* MSE(me)/MSE(gm_c) and MSE(me_c)/MSE(gm_c) per k. */
CS_API cs_status cs_sim_mse_csv(const size_t* k_list, size_t k_count,
                                uint64_t replicates, uint64_t seed,
                                const char* out_path, const char* provenance);
CS_API cs_status cs_sim_hist_csv(cs_estimator estimator, double lambda,
                                 size_t k, double d, uint64_t replicates,
                                 uint64_t seed, size_t bins,
                                 const char* out_path,
                                 const char* provenance);

#ifdef __cplusplus
}
#endif

#endif /* CAUCHYSKETCH_H */
