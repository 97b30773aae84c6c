#pragma once

#include <iosfwd>
#include <span>

#include "csk/types.hpp"

namespace csk {

/// All estimators accept the k projected differences of one row pair and
/// return a nonnegative distance estimate. Every one of them is exactly
/// scale-equivariant: est(c*x) = c*est(x) for c > 0.

/// Sample median of |x_j|: middle order statistic for odd k, mean of the two
/// middle ones for even k. Biased upward at small k.
Estimate estimate_median(std::span<const double> x);

/// E(median of |x_j|)/d for k = 2m+1: the expectation of the sample median
/// of k standard half-Cauchy variables, evaluated by quadrature to relative
/// 1e-10 and cached. Infinite at k = 1; undefined (refused) for even k.
double median_bias_factor(std::size_t k);

/// median / b_me(k); unbiased for odd k >= 3.
Estimate estimate_median_corrected(std::span<const double> x);

/// cos^k(pi/2k) * prod |x_j|^(1/k), computed as mean of logs; unbiased for
/// k > 1. Returns 0 if any coordinate is zero.
Estimate estimate_gm(std::span<const double> x);

struct FractionalOptions {
    double lambda = 0.25;  // |lambda| < 1, lambda != 0
};

/// ((1/k) sum |x_j|^lambda * cos(lambda*pi/2))^(1/lambda).
Estimate estimate_fractional(std::span<const double> x, FractionalOptions opts);

/// Unique positive root of k - sum 2d^2/(x_j^2 + d^2) = 0 via safeguarded
/// Newton, to relative tolerance 1e-12. All-zero samples return 0 flagged.
Estimate estimate_mle_raw(std::span<const double> x);

/// mle * (1 - 1/k).
Estimate estimate_mle_corrected(std::span<const double> x);

/// (q_.75 - q_.25)/2 of |x_j| with linear interpolation at position
/// (k-1)p + 1. Needs k >= 4.
Estimate estimate_quantile_or(std::span<const double> x);

/// (1/k) sum x_j^2; the estimator for normal-kind sketches.
Estimate estimate_l2_squared(std::span<const double> x);

/// Dispatcher; lambda only read for EstimatorKind::frac.
Estimate apply_estimator(EstimatorKind kind, std::span<const double> x,
                         double lambda = 0.25);

enum class Exactness : std::uint8_t {
    exact = 0,
    asymptotic = 1,
    infinite = 2,
    unavailable = 3,
};

struct MomentValue {
    double value = 0.0;
    Exactness tag = Exactness::unavailable;
};

struct MomentSummary {
    MomentValue mean, variance, mu3, mu4;
};

/// Closed-form moments for me_c, gm_c, mle, mle_c. Fields the theory proves
/// divergent are tagged infinite (e.g. me_c variance at k = 3, gm_c variance
/// at k = 2); asymptotic formulas are tagged as such.
MomentSummary theoretical_moments(EstimatorKind kind, std::size_t k, double d);

/// Cache of b_me and the me_c variance factor per odd k; population is
/// idempotent and concurrent reads are safe.
class BiasTable {
public:
    static BiasTable& instance();

    double bias(std::size_t k);             // b_me(k)
    double variance_factor(std::size_t k);  // Var(me_c)/d^2; +inf at k = 3

private:
    BiasTable() = default;
};

/// CSV rows (k, b_me, variance-factor) for odd k in [3, max_k].
void write_bias_table_csv(std::ostream& out, std::size_t max_k,
                          const std::string& provenance = {});

}  // namespace csk
