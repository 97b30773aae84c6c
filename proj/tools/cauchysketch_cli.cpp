// Command-line front end over the cauchysketch C API. Every subcommand is
// deterministic given its flags; all randomness flows from --seed.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cauchysketch.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitFailure = 3;

int exit_code_for(cs_status status) {
    if (status == CS_OK) return 0;
    return status == CS_ERR_IO ? kExitIo : kExitFailure;
}

int report(cs_status status) {
    if (status == CS_OK) return 0;
    std::fprintf(stderr, "error: %s: %s\n", cs_status_name(status),
                 cs_last_error());
    return exit_code_for(status);
}

cs_generator parse_generator(const std::string& name, bool& ok) {
    ok = true;
    if (name == "cauchy") return CS_GEN_CAUCHY;
    if (name == "normal") return CS_GEN_NORMAL;
    if (name == "sparse") return CS_GEN_SPARSE;
    ok = false;
    return CS_GEN_CAUCHY;
}

cs_estimator parse_estimator(const std::string& name, bool& ok) {
    ok = true;
    if (name == "me") return CS_EST_ME;
    if (name == "me_c") return CS_EST_ME_C;
    if (name == "gm_c" || name == "gm") return CS_EST_GM_C;
    if (name == "frac") return CS_EST_FRAC;
    if (name == "mle") return CS_EST_MLE;
    if (name == "mle_c") return CS_EST_MLE_C;
    if (name == "or") return CS_EST_OR;
    if (name == "l2sq") return CS_EST_L2SQ;
    ok = false;
    return CS_EST_GM_C;
}

std::string build_provenance(int argc, char** argv) {
    std::string p = "cli=cauchysketch";
    for (int i = 1; i < argc; ++i) {
        p += ' ';
        p += argv[i];
    }
    return p;
}

struct SketchHandle {
    cs_sketch* ptr = nullptr;
    ~SketchHandle() { cs_sketch_free(ptr); }
};

struct MatrixHandle {
    cs_matrix* ptr = nullptr;
    ~MatrixHandle() { cs_matrix_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"l1 dimension reduction with Cauchy random projections"};
    app.require_subcommand(1);
    const std::string provenance = build_provenance(argc, argv);

    // ---- project ----
    auto* project = app.add_subcommand(
        "project", "Project a CSV matrix into a binary sketch");
    std::string project_in, project_out, project_kind = "cauchy";
    std::string project_delim = ",";
    std::uint64_t project_seed = 0;
    std::size_t project_k = 0;
    double project_s = 1.0;
    bool project_header = false;
    project->add_option("--in", project_in, "input CSV path")->required();
    project->add_option("--out", project_out, "output sketch path")->required();
    project->add_option("--k", project_k, "target dimension")->required();
    project->add_option("--seed", project_seed, "projection seed");
    project->add_option("--kind", project_kind, "cauchy|normal|sparse");
    project->add_option("--s", project_s, "sparse inverse density (s >= 1)");
    project->add_option("--delim", project_delim, "CSV delimiter");
    project->add_flag("--header", project_header, "skip the first CSV row");

    // ---- estimate ----
    auto* estimate = app.add_subcommand(
        "estimate", "Estimate the distance between one row pair");
    std::string est_sketch, est_name = "gm_c";
    std::size_t est_i = 0, est_j = 0;
    double est_lambda = 0.25;
    estimate->add_option("--sketch", est_sketch, "sketch path")->required();
    estimate->add_option("--i", est_i, "first row index")->required();
    estimate->add_option("--j", est_j, "second row index")->required();
    estimate->add_option("--estimator", est_name,
                         "me|me_c|gm_c|frac|mle|mle_c|or|l2sq");
    estimate->add_option("--lambda", est_lambda, "frac estimator exponent");

    // ---- pairwise ----
    auto* pairwise = app.add_subcommand(
        "pairwise", "Estimate all (or listed) pairwise distances to CSV");
    std::string pw_sketch, pw_name = "gm_c", pw_out = "-", pw_pairs;
    double pw_lambda = 0.25;
    pairwise->add_option("--sketch", pw_sketch, "sketch path")->required();
    pairwise->add_option("--estimator", pw_name,
                         "me|me_c|gm_c|frac|mle|mle_c|or|l2sq");
    pairwise->add_option("--lambda", pw_lambda, "frac estimator exponent");
    pairwise->add_option("--pairs", pw_pairs,
                         "two-column CSV of row index pairs");
    pairwise->add_option("--out", pw_out, "output CSV path ('-' = stdout)");

    // ---- plan ----
    auto* plan = app.add_subcommand(
        "plan", "Sample size k for a target (n, eps, delta)");
    std::string plan_norm = "l1";
    std::size_t plan_n = 0;
    double plan_eps = 0.5, plan_delta = 0.05;
    plan->add_option("--norm", plan_norm, "l1|l2");
    plan->add_option("--n", plan_n, "number of data points")->required();
    plan->add_option("--eps", plan_eps, "relative error")->required();
    plan->add_option("--delta", plan_delta, "failure probability")->required();

    // ---- bounds ----
    auto* bounds = app.add_subcommand(
        "bounds", "Tail bounds for the gm or mle estimator at (k, eps)");
    std::string bounds_name = "gm";
    std::size_t bounds_k = 0;
    std::vector<double> bounds_eps;
    double bounds_c = 0.0;
    bounds->add_option("--estimator", bounds_name, "gm|mle");
    bounds->add_option("--k", bounds_k, "sample size")->required();
    bounds->add_option("--eps", bounds_eps, "relative error(s)")->required();
    bounds->add_option("--c", bounds_c,
                       "gm exponential constant (default 8)");

    // ---- simulate ----
    auto* simulate = app.add_subcommand(
        "simulate", "Monte Carlo verification tables (moments|tail|mse|hist)");
    std::string sim_what = "moments", sim_name = "gm_c", sim_out = "-";
    std::size_t sim_k = 10, sim_bins = 50;
    double sim_d = 1.0, sim_lambda = 0.25;
    std::uint64_t sim_r = 100000, sim_seed = 0;
    std::vector<double> sim_grid;
    std::vector<std::size_t> sim_klist;
    simulate->add_option("--what", sim_what, "moments|tail|mse|hist");
    simulate->add_option("--estimator", sim_name,
                         "me|me_c|gm_c|frac|mle|mle_c|or|l2sq");
    simulate->add_option("--k", sim_k, "sample size per replicate");
    simulate->add_option("--d", sim_d, "true scale (default 1)");
    simulate->add_option("--R", sim_r, "replicates");
    simulate->add_option("--seed", sim_seed, "master seed");
    simulate->add_option("--lambda", sim_lambda, "frac estimator exponent");
    simulate->add_option("--eps-grid", sim_grid, "tail eps grid");
    simulate->add_option("--k-list", sim_klist, "mse k list");
    simulate->add_option("--bins", sim_bins, "histogram bins");
    simulate->add_option("--out", sim_out, "output CSV path ('-' = stdout)");

    // ---- bias-table ----
    auto* bias = app.add_subcommand(
        "bias-table", "Median bias factors b_me for odd k up to max-k");
    std::size_t bias_max_k = 101;
    std::string bias_out = "-";
    bias->add_option("--max-k", bias_max_k, "largest odd k");
    bias->add_option("--out", bias_out, "output CSV path ('-' = stdout)");

    CLI11_PARSE(app, argc, argv);

    bool ok = true;
    if (project->parsed()) {
        const cs_generator generator = parse_generator(project_kind, ok);
        if (!ok) {
            std::fprintf(stderr, "error: unknown generator '%s'\n",
                         project_kind.c_str());
            return kExitUsage;
        }
        if (project_delim.size() != 1) {
            std::fprintf(stderr, "error: --delim needs a single character\n");
            return kExitUsage;
        }
        MatrixHandle matrix;
        cs_status status = cs_matrix_load_csv(
            project_in.c_str(), project_delim[0], project_header, &matrix.ptr);
        if (status != CS_OK) return report(status);
        if (project_k >= cs_matrix_cols(matrix.ptr)) {
            std::fprintf(stderr,
                         "warning: k=%zu >= D=%zu; the sketch will not be a "
                         "reduction\n",
                         project_k, cs_matrix_cols(matrix.ptr));
        }
        SketchHandle sketch;
        status = cs_project(matrix.ptr, project_seed, project_k, generator,
                            project_s, &sketch.ptr);
        if (status != CS_OK) return report(status);
        status = cs_sketch_write(sketch.ptr, project_out.c_str());
        if (status != CS_OK) return report(status);
        std::printf("n=%zu D=%zu k=%zu seed=%" PRIu64 " kind=%s out=%s\n",
                    cs_sketch_rows(sketch.ptr),
                    cs_sketch_source_dim(sketch.ptr),
                    cs_sketch_dim(sketch.ptr), cs_sketch_seed(sketch.ptr),
                    project_kind.c_str(), project_out.c_str());
        return 0;
    }

    if (estimate->parsed()) {
        const cs_estimator estimator = parse_estimator(est_name, ok);
        if (!ok) {
            std::fprintf(stderr, "error: unknown estimator '%s'\n",
                         est_name.c_str());
            return kExitUsage;
        }
        SketchHandle sketch;
        cs_status status = cs_sketch_read(est_sketch.c_str(), &sketch.ptr);
        if (status != CS_OK) return report(status);
        double value = 0.0;
        int flagged = 0;
        status = cs_estimate_pair(sketch.ptr, est_i, est_j, estimator,
                                  est_lambda, &value, &flagged);
        if (status != CS_OK) return report(status);
        std::printf("%.12g%s\n", value, flagged ? " (all-zero sample)" : "");
        return 0;
    }

    if (pairwise->parsed()) {
        const cs_estimator estimator = parse_estimator(pw_name, ok);
        if (!ok) {
            std::fprintf(stderr, "error: unknown estimator '%s'\n",
                         pw_name.c_str());
            return kExitUsage;
        }
        SketchHandle sketch;
        cs_status status = cs_sketch_read(pw_sketch.c_str(), &sketch.ptr);
        if (status != CS_OK) return report(status);
        status = cs_pairwise_csv(sketch.ptr, estimator, pw_lambda,
                                 pw_pairs.empty() ? nullptr : pw_pairs.c_str(),
                                 pw_out.c_str(), provenance.c_str());
        return report(status);
    }

    if (plan->parsed()) {
        std::size_t k = 0;
        int binding = 0;
        cs_status status;
        if (plan_norm == "l1") {
            status = cs_plan_l1(plan_n, plan_eps, plan_delta, &k, &binding);
        } else if (plan_norm == "l2") {
            status = cs_plan_l2(plan_n, plan_eps, plan_delta, &k);
        } else {
            std::fprintf(stderr, "error: unknown norm '%s'\n",
                         plan_norm.c_str());
            return kExitUsage;
        }
        if (status != CS_OK) return report(status);
        if (plan_norm == "l1") {
            std::printf("k=%zu binding=%s\n", k,
                        binding == 0 ? "jl_formula" : "epsilon_floor");
        } else {
            std::printf("k=%zu binding=jl_formula\n", k);
        }
        return 0;
    }

    if (bounds->parsed()) {
        if (bounds_name == "gm" || bounds_name == "gm_c") {
            std::printf("# cauchysketch bounds estimator=gm k=%zu\n",
                        bounds_k);
            std::printf(
                "eps,markov_upper,t1,markov_lower,t2,markov_lower_valid,"
                "exp_upper,exp_lower,exp_lower_valid\n");
            for (double eps : bounds_eps) {
                cs_gm_bounds b;
                const cs_status status =
                    cs_gm_tail_bounds(bounds_k, eps, bounds_c, &b);
                if (status != CS_OK) return report(status);
                std::printf("%g,%.12g,%.12g,%.12g,%.12g,%d,%.12g,%.12g,%d\n",
                            b.eps, b.markov_upper, b.t_upper, b.markov_lower,
                            b.t_lower, b.markov_lower_valid, b.exp_upper,
                            b.exp_lower, b.exp_lower_valid);
            }
            return 0;
        }
        if (bounds_name == "mle" || bounds_name == "mle_c") {
            std::printf("# cauchysketch bounds estimator=mle k=%zu\n",
                        bounds_k);
            std::printf(
                "eps,alpha,gamma_upper,gamma_lower,gamma_chern_upper,"
                "gamma_chern_lower,ig_upper,ig_lower,ig_chern_upper,"
                "ig_chern_lower,ig_chern_sym,normal_upper,normal_lower\n");
            for (double eps : bounds_eps) {
                cs_mle_bounds b;
                const cs_status status = cs_mle_tail_bounds(bounds_k, eps, &b);
                if (status != CS_OK) return report(status);
                std::printf(
                    "%g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,"
                    "%.12g,%.12g,%.12g,%.12g\n",
                    b.eps, b.alpha, b.gamma_upper, b.gamma_lower,
                    b.gamma_chern_upper, b.gamma_chern_lower, b.ig_upper,
                    b.ig_lower, b.ig_chern_upper, b.ig_chern_lower,
                    b.ig_chern_symmetric, b.normal_upper, b.normal_lower);
            }
            return 0;
        }
        std::fprintf(stderr, "error: unknown bounds estimator '%s'\n",
                     bounds_name.c_str());
        return kExitUsage;
    }

    if (simulate->parsed()) {
        const cs_estimator estimator = parse_estimator(sim_name, ok);
        if (!ok) {
            std::fprintf(stderr, "error: unknown estimator '%s'\n",
                         sim_name.c_str());
            return kExitUsage;
        }
        cs_status status;
        if (sim_what == "moments") {
            status = cs_sim_moments_csv(estimator, sim_lambda, sim_k, sim_d,
                                        sim_r, sim_seed, sim_out.c_str(),
                                        provenance.c_str());
        } else if (sim_what == "tail") {
            if (sim_grid.empty()) {
                for (int i = 1; i <= 10; ++i) sim_grid.push_back(0.1 * i);
            }
            status = cs_sim_tail_csv(estimator, sim_lambda, sim_k, sim_d,
                                     sim_r, sim_seed, sim_grid.data(),
                                     sim_grid.size(), sim_out.c_str(),
                                     provenance.c_str());
        } else if (sim_what == "mse") {
            if (sim_klist.empty()) sim_klist = {5, 7, 11, 21, 51};
            status = cs_sim_mse_csv(sim_klist.data(), sim_klist.size(), sim_r,
                                    sim_seed, sim_out.c_str(),
                                    provenance.c_str());
        } else if (sim_what == "hist") {
            status = cs_sim_hist_csv(estimator, sim_lambda, sim_k, sim_d,
                                     sim_r, sim_seed, sim_bins,
                                     sim_out.c_str(), provenance.c_str());
        } else {
            std::fprintf(stderr, "error: unknown simulation '%s'\n",
                         sim_what.c_str());
            return kExitUsage;
        }
        return report(status);
    }

    if (bias->parsed()) {
        return report(cs_bias_table_csv(bias_max_k, bias_out.c_str(),
                                        provenance.c_str()));
    }

    return kExitUsage;
}
