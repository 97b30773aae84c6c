#include "cauchysketch.h"

#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "csk/csv.hpp"
#include "csk/distributions.hpp"
#include "csk/estimators.hpp"
#include "csk/montecarlo.hpp"
#include "csk/pairwise.hpp"
#include "csk/projection.hpp"
#include "csk/types.hpp"

struct cs_matrix {
    csk::DataMatrix impl;
};

struct cs_sketch {
    csk::Sketch impl;
};

namespace {

thread_local std::string tl_last_error;

cs_status map_errc(csk::errc code) {
    using csk::errc;
    switch (code) {
        case errc::ok: return CS_OK;
        case errc::io: return CS_ERR_IO;
        case errc::parse: return CS_ERR_PARSE;
        case errc::ragged_rows: return CS_ERR_RAGGED_ROWS;
        case errc::nonfinite: return CS_ERR_PARSE;
        case errc::length_mismatch:
        case errc::dimension_mismatch: return CS_ERR_DIMENSION;
        case errc::index_out_of_range: return CS_ERR_INDEX;
        case errc::bad_magic: return CS_ERR_BAD_MAGIC;
        case errc::version_mismatch: return CS_ERR_VERSION;
        case errc::checksum_mismatch: return CS_ERR_CHECKSUM;
        case errc::estimator_mismatch: return CS_ERR_ESTIMATOR_MISMATCH;
        case errc::no_convergence: return CS_ERR_NO_CONVERGENCE;
        default: return CS_ERR_INVALID_ARGUMENT;
    }
}

template <typename Fn>
cs_status guarded(Fn&& fn) {
    try {
        fn();
        return CS_OK;
    } catch (const csk::Error& e) {
        tl_last_error = e.what();
        return map_errc(e.code());
    } catch (const std::bad_alloc&) {
        tl_last_error = "out of memory";
        return CS_ERR_UNKNOWN;
    } catch (const std::exception& e) {
        tl_last_error = e.what();
        return CS_ERR_UNKNOWN;
    }
}

cs_status invalid(const char* message) {
    tl_last_error = message;
    return CS_ERR_INVALID_ARGUMENT;
}

csk::GeneratorKind to_generator(cs_generator generator, double sparse_s) {
    switch (generator) {
        case CS_GEN_CAUCHY: return csk::GeneratorKind::cauchy();
        case CS_GEN_NORMAL: return csk::GeneratorKind::normal();
        case CS_GEN_SPARSE: return csk::GeneratorKind::sparse(sparse_s);
    }
    csk::fail(csk::errc::invalid_generator, "unknown generator enum");
}

csk::EstimatorKind to_estimator(cs_estimator estimator) {
    if (estimator < CS_EST_ME || estimator > CS_EST_L2SQ) {
        csk::fail(csk::errc::unsupported_kind, "unknown estimator enum");
    }
    return static_cast<csk::EstimatorKind>(estimator);
}

/// Runs writer(stream) against the path, with "-" meaning stdout.
template <typename Writer>
void with_output(const char* out_path, Writer&& writer) {
    if (out_path == nullptr) {
        csk::fail(csk::errc::io, "output path is null");
    }
    if (std::string_view(out_path) == "-") {
        writer(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(out_path);
    if (!out) {
        csk::fail(csk::errc::io, std::string("cannot write '") + out_path +
                                     "'");
    }
    writer(out);
    out.flush();
    if (!out) {
        csk::fail(csk::errc::io,
                  std::string("write failed for '") + out_path + "'");
    }
}

std::string provenance_string(const char* provenance) {
    return provenance ? std::string(provenance) : std::string();
}

}  // namespace

extern "C" {

const char* cs_version(void) { return "1.0.0"; }

const char* cs_status_name(cs_status status) {
    switch (status) {
        case CS_OK: return "ok";
        case CS_ERR_IO: return "io_error";
        case CS_ERR_PARSE: return "parse_error";
        case CS_ERR_RAGGED_ROWS: return "ragged_rows";
        case CS_ERR_DIMENSION: return "dimension_mismatch";
        case CS_ERR_INDEX: return "index_out_of_range";
        case CS_ERR_BAD_MAGIC: return "bad_magic";
        case CS_ERR_VERSION: return "version_mismatch";
        case CS_ERR_CHECKSUM: return "checksum_mismatch";
        case CS_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case CS_ERR_ESTIMATOR_MISMATCH: return "estimator_mismatch";
        case CS_ERR_NO_CONVERGENCE: return "no_convergence";
        case CS_ERR_UNKNOWN: return "unknown_error";
    }
    return "unknown_status";
}

const char* cs_last_error(void) { return tl_last_error.c_str(); }

cs_status cs_matrix_load_csv(const char* path, char delimiter,
                             int skip_header, cs_matrix** out) {
    if (!path || !out) return invalid("null argument");
    *out = nullptr;
    return guarded([&] {
        auto m = std::make_unique<cs_matrix>(cs_matrix{
            csk::load_matrix_csv(path, delimiter ? delimiter : ',',
                                 skip_header != 0)});
        *out = m.release();
    });
}

cs_status cs_matrix_from_values(size_t n, size_t d, const double* values,
                                cs_matrix** out) {
    if (!values || !out) return invalid("null argument");
    *out = nullptr;
    return guarded([&] {
        std::vector<double> copy(values, values + n * d);
        auto m = std::make_unique<cs_matrix>(
            cs_matrix{csk::DataMatrix(n, d, std::move(copy))});
        *out = m.release();
    });
}

void cs_matrix_free(cs_matrix* m) { delete m; }

size_t cs_matrix_rows(const cs_matrix* m) { return m ? m->impl.rows() : 0; }

size_t cs_matrix_cols(const cs_matrix* m) { return m ? m->impl.cols() : 0; }

cs_status cs_matrix_l1_distance(const cs_matrix* m, size_t i, size_t j,
                                double* out) {
    if (!m || !out) return invalid("null argument");
    return guarded([&] { *out = csk::l1_distance(m->impl.row(i), m->impl.row(j)); });
}

cs_status cs_project(const cs_matrix* m, uint64_t seed, size_t k,
                     cs_generator generator, double sparse_s,
                     cs_sketch** out) {
    if (!m || !out) return invalid("null argument");
    *out = nullptr;
    return guarded([&] {
        csk::ProjectionConfig config;
        config.seed = seed;
        config.k = k;
        config.D = m->impl.cols();
        config.kind = to_generator(generator, sparse_s);
        auto s = std::make_unique<cs_sketch>(
            cs_sketch{csk::project_matrix(m->impl, config)});
        *out = s.release();
    });
}

cs_status cs_sketch_write(const cs_sketch* s, const char* path) {
    if (!s || !path) return invalid("null argument");
    return guarded([&] { csk::sketch_write(s->impl, path); });
}

cs_status cs_sketch_read(const char* path, cs_sketch** out) {
    if (!path || !out) return invalid("null argument");
    *out = nullptr;
    return guarded([&] {
        auto s = std::make_unique<cs_sketch>(cs_sketch{csk::sketch_read(path)});
        *out = s.release();
    });
}

void cs_sketch_free(cs_sketch* s) { delete s; }

size_t cs_sketch_rows(const cs_sketch* s) { return s ? s->impl.n : 0; }

size_t cs_sketch_dim(const cs_sketch* s) { return s ? s->impl.config.k : 0; }

size_t cs_sketch_source_dim(const cs_sketch* s) {
    return s ? s->impl.config.D : 0;
}

uint64_t cs_sketch_seed(const cs_sketch* s) {
    return s ? s->impl.config.seed : 0;
}

cs_generator cs_sketch_generator(const cs_sketch* s) {
    return s ? static_cast<cs_generator>(s->impl.config.kind.tag)
             : CS_GEN_CAUCHY;
}

double cs_sketch_generator_s(const cs_sketch* s) {
    return s ? s->impl.config.kind.s : 0.0;
}

cs_status cs_estimate_pair(const cs_sketch* s, size_t i, size_t j,
                           cs_estimator estimator, double lambda,
                           double* value, int* flagged) {
    if (!s || !value) return invalid("null argument");
    return guarded([&] {
        csk::check_estimator_compatibility(to_estimator(estimator),
                                           s->impl.config.kind);
        const csk::DiffSample diff = csk::diff_sample(s->impl, i, j);
        const csk::Estimate est =
            csk::apply_estimator(to_estimator(estimator), diff.x, lambda);
        *value = est.value;
        if (flagged) *flagged = est.flagged ? 1 : 0;
    });
}

cs_status cs_estimate_samples(const double* x, size_t k,
                              cs_estimator estimator, double lambda,
                              double* value, int* flagged) {
    if (!x || !value) return invalid("null argument");
    return guarded([&] {
        const csk::Estimate est = csk::apply_estimator(
            to_estimator(estimator), std::span<const double>(x, k), lambda);
        *value = est.value;
        if (flagged) *flagged = est.flagged ? 1 : 0;
    });
}

cs_status cs_pairwise_csv(const cs_sketch* s, cs_estimator estimator,
                          double lambda, const char* pairs_path,
                          const char* out_path, const char* provenance) {
    if (!s) return invalid("null argument");
    return guarded([&] {
        std::optional<std::vector<std::pair<std::size_t, std::size_t>>> pairs;
        if (pairs_path) pairs = csk::load_pairs_csv(pairs_path);
        const csk::PairwiseResult result = csk::pairwise_estimates(
            s->impl, to_estimator(estimator), lambda, pairs);
        with_output(out_path, [&](std::ostream& out) {
            csk::write_pairwise_csv(out, result, provenance_string(provenance));
        });
    });
}

cs_status cs_plan_l1(size_t n, double eps, double delta, size_t* k,
                     int* binding) {
    if (!k) return invalid("null argument");
    return guarded([&] {
        const csk::PlanResult plan = csk::plan_k_l1({n, eps, delta});
        *k = plan.k;
        if (binding) {
            *binding =
                plan.binding == csk::BindingConstraint::jl_formula ? 0 : 1;
        }
    });
}

cs_status cs_plan_l2(size_t n, double eps, double delta, size_t* k) {
    if (!k) return invalid("null argument");
    return guarded([&] { *k = csk::plan_k_l2({n, eps, delta}).k; });
}

cs_status cs_gm_tail_bounds(size_t k, double eps, double exp_constant,
                            cs_gm_bounds* out) {
    if (!out) return invalid("null argument");
    return guarded([&] {
        const csk::TailBoundReport report = csk::gm_tail_report(k, eps);
        csk::GMConstant constant;
        if (exp_constant > 0.0) constant.c = exp_constant;
        const csk::ExponentialBound exp_bound =
            csk::gm_exponential(k, eps, constant);
        out->eps = eps;
        out->markov_upper = report.upper;
        out->markov_lower = report.lower;
        out->t_upper = report.t_upper;
        out->t_lower = report.t_lower;
        out->markov_lower_valid = report.markov_valid_lower ? 1 : 0;
        out->exp_upper = exp_bound.upper;
        out->exp_lower = exp_bound.lower;
        out->exp_lower_valid = exp_bound.lower_valid ? 1 : 0;
    });
}

cs_status cs_mle_tail_bounds(size_t k, double eps, cs_mle_bounds* out) {
    if (!out) return invalid("null argument");
    return guarded([&] {
        const csk::GammaParams gamma = csk::gamma_fit(k, 1.0);
        const csk::TailPair gamma_exact = csk::gamma_tail(k, eps);
        const csk::TailPair gamma_chern = csk::gamma_chernoff(k, eps);
        const csk::TailPair ig_exact = csk::ig_tail_exact(k, eps, 1.0);
        const csk::IGChernoff ig_chern = csk::ig_chernoff(k, eps);
        const csk::TailPair normal = csk::normal_tail(k, eps);
        out->eps = eps;
        out->alpha = gamma.alpha;
        out->beta = gamma.beta;
        out->gamma_upper = gamma_exact.upper;
        out->gamma_lower = gamma_exact.lower;
        out->gamma_chern_upper = gamma_chern.upper;
        out->gamma_chern_lower = gamma_chern.lower;
        out->ig_upper = ig_exact.upper;
        out->ig_lower = ig_exact.lower;
        out->ig_chern_upper = ig_chern.upper;
        out->ig_chern_lower = ig_chern.lower;
        out->ig_chern_symmetric = ig_chern.symmetric;
        out->normal_upper = normal.upper;
        out->normal_lower = normal.lower;
    });
}

cs_status cs_median_bias_factor(size_t k, double* out) {
    if (!out) return invalid("null argument");
    return guarded([&] { *out = csk::median_bias_factor(k); });
}

cs_status cs_bias_table_csv(size_t max_k, const char* out_path,
                            const char* provenance) {
    return guarded([&] {
        with_output(out_path, [&](std::ostream& out) {
            csk::write_bias_table_csv(out, max_k,
                                      provenance_string(provenance));
        });
    });
}

double cs_std_normal_cdf(double z) { return csk::std_normal_cdf(z); }

cs_status cs_sim_moments_csv(cs_estimator estimator, double lambda, size_t k,
                             double d, uint64_t replicates, uint64_t seed,
                             const char* out_path, const char* provenance) {
    return guarded([&] {
        csk::mc::SimSpec spec;
        spec.estimator = to_estimator(estimator);
        spec.lambda = lambda;
        spec.k = k;
        spec.d = d;
        spec.replicates = replicates;
        spec.seed = seed;
        const csk::mc::SimMoments moments = csk::mc::run_moments(spec);
        with_output(out_path, [&](std::ostream& out) {
            csk::mc::write_moments_csv(out, spec, moments,
                                       provenance_string(provenance));
        });
    });
}

cs_status cs_sim_tail_csv(cs_estimator estimator, double lambda, size_t k,
                          double d, uint64_t replicates, uint64_t seed,
                          const double* eps_grid, size_t grid_len,
                          const char* out_path, const char* provenance) {
    if (!eps_grid || grid_len == 0) return invalid("empty eps grid");
    return guarded([&] {
        csk::mc::SimSpec spec;
        spec.estimator = to_estimator(estimator);
        spec.lambda = lambda;
        spec.k = k;
        spec.d = d;
        spec.replicates = replicates;
        spec.seed = seed;
        spec.eps_grid.assign(eps_grid, eps_grid + grid_len);
        const csk::mc::TailCurve curve = csk::mc::run_tail_curve(spec);
        with_output(out_path, [&](std::ostream& out) {
            csk::mc::write_tail_csv(out, curve, provenance_string(provenance));
        });
    });
}

cs_status cs_sim_mse_csv(const size_t* k_list, size_t k_count,
                         uint64_t replicates, uint64_t seed,
                         const char* out_path, const char* provenance) {
    if (!k_list || k_count == 0) return invalid("empty k list");
    return guarded([&] {
        const std::vector<csk::mc::MseRow> rows = csk::mc::run_mse_ratios(
            std::span<const std::size_t>(k_list, k_count), replicates, seed);
        with_output(out_path, [&](std::ostream& out) {
            csk::mc::write_mse_csv(out, rows, replicates, seed,
                                   provenance_string(provenance));
        });
    });
}

cs_status cs_sim_hist_csv(cs_estimator estimator, double lambda, size_t k,
                          double d, uint64_t replicates, uint64_t seed,
                          size_t bins, const char* out_path,
                          const char* provenance) {
    return guarded([&] {
        csk::mc::SimSpec spec;
        spec.estimator = to_estimator(estimator);
        spec.lambda = lambda;
        spec.k = k;
        spec.d = d;
        spec.replicates = replicates;
        spec.seed = seed;
        const csk::mc::Histogram hist = csk::mc::export_histogram(spec, bins);
        with_output(out_path, [&](std::ostream& out) {
            csk::mc::write_histogram_csv(out, hist,
                                         provenance_string(provenance));
        });
    });
}

}  // extern "C"
