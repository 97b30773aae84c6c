#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csk/bounds.hpp"
#include "csk/distributions.hpp"
#include "csk/types.hpp"

namespace csk::mc {

/// One simulation run: R replicates, each drawing k i.i.d. C(0,d) samples
/// (N(0,sqrt(d)) for l2sq) through counter-based substreams and applying the
/// estimator. Replicate r is a pure function of (seed, r), so runs are
/// deterministic and trivially parallel.
struct SimSpec {
    EstimatorKind estimator = EstimatorKind::gm_c;
    std::size_t k = 10;
    double d = 1.0;
    std::uint64_t replicates = 100000;
    std::uint64_t seed = 0;
    double lambda = 0.25;          // frac estimator only
    std::vector<double> eps_grid;  // tail runs only

    void validate() const;
};

/// The estimate produced by replicate r; scratch avoids per-call allocation.
double replicate_estimate(const SimSpec& spec, std::uint64_t r,
                          std::vector<double>& scratch);

/// All R replicate estimates, in replicate order regardless of thread count.
std::vector<double> simulate_estimates(const SimSpec& spec,
                                       unsigned threads = 0);

struct MomentEstimate {
    double value = 0.0;
    double se = 0.0;  // jackknife standard error over 100 blocks
};

struct SimMoments {
    MomentEstimate mean, variance, mu3, mu4;
};

/// Two-pass central moments (global mean first, then powers of deviations)
/// with delete-block jackknife SEs.
SimMoments moments_of(std::span<const double> values);

SimMoments run_moments(const SimSpec& spec, unsigned threads = 0);

struct GmBoundColumns {
    TailBoundReport markov;     // optimal-t bounds + validity flags
    ExponentialBound exponential;
};

struct MleBoundColumns {
    TailPair gamma_exact;
    TailPair gamma_chern;
    TailPair ig_exact;
    double ig_chern_upper = 1.0;
    double ig_chern_lower = 1.0;
    double ig_chern_symmetric = 2.0;
    TailPair normal;
};

struct TailPoint {
    double eps = 0.0;
    double upper_p = 0.0, upper_se = 0.0;
    double lower_p = 0.0, lower_se = 0.0;
    std::uint64_t upper_hits = 0, lower_hits = 0;
    bool low_confidence_upper = false;  // fewer than 100 exceedances
    bool low_confidence_lower = false;
    std::optional<GmBoundColumns> gm;
    std::optional<MleBoundColumns> mle;
};

struct TailCurve {
    SimSpec spec;
    std::vector<TailPoint> points;
};

/// Empirical Pr(est >= (1+eps)d) and Pr(est <= (1-eps)d) per grid point,
/// with the matching closed-form bounds for the estimator family.
TailCurve run_tail_curve(const SimSpec& spec, unsigned threads = 0);

enum class MseStatus : std::uint8_t {
    ok = 0,
    infinite_ratio = 1,  // k = 3: the ratios diverge
    invalid_k = 2,       // even k unsupported
};

struct MseRow {
    std::size_t k = 0;
    double mse_me = 0.0, mse_me_c = 0.0, mse_gm_c = 0.0;
    double ratio_me = 0.0;    // MSE(me)/MSE(gm_c)
    double ratio_me_c = 0.0;  // MSE(me_c)/MSE(gm_c)
    MseStatus status = MseStatus::ok;
};

/// Shared replicate samples across the three estimators per k (common
/// random numbers) for variance-reduced ratios.
std::vector<MseRow> run_mse_ratios(std::span<const std::size_t> k_list,
                                   std::uint64_t replicates,
                                   std::uint64_t seed, unsigned threads = 0);

struct Histogram {
    SimSpec spec;
    std::size_t bin_count = 0;
    double bin_width = 0.0;  // equal-width bins over [0, 0.999 quantile]
    std::vector<std::uint64_t> counts;  // overflow clamped into the last bin

    double center(std::size_t b) const { return (b + 0.5) * bin_width; }
};

Histogram export_histogram(const SimSpec& spec, std::size_t bin_count,
                           unsigned threads = 0);

/// CSV writers; every table starts with a '#' provenance comment recording
/// the full spec.
void write_moments_csv(std::ostream& out, const SimSpec& spec,
                       const SimMoments& m, const std::string& provenance = {});
void write_tail_csv(std::ostream& out, const TailCurve& curve,
                    const std::string& provenance = {});
void write_mse_csv(std::ostream& out, std::span<const MseRow> rows,
                   std::uint64_t replicates, std::uint64_t seed,
                   const std::string& provenance = {});
void write_histogram_csv(std::ostream& out, const Histogram& hist,
                         const std::string& provenance = {});

}  // namespace csk::mc
