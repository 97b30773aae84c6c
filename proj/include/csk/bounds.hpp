#pragma once

#include <cstddef>
#include <cstdint>

namespace csk {

/// Tail machinery for the bias-corrected geometric mean estimator and the
/// sample-size planners built on it.

struct MarkovBound {
    double bound = 1.0;
    double t = 0.0;  // the optimal Markov exponent, 0 <= t < k
};

/// Pr(gm_c >= (1+eps) d) <= cos^(k t1)(pi/2k) / (cos^k(pi t1/2k) (1+eps)^t1)
/// at the minimizing t1; eps >= 0, k >= 2.
MarkovBound gm_markov_upper(std::size_t k, double eps);

/// Pr(gm_c <= (1-eps) d) <= (1-eps)^t2 / (cos^k(pi t2/2k) cos^(k t2)(pi/2k))
/// at the minimizing t2; requires k >= pi^2/(8 eps), 0 <= eps <= 1.
MarkovBound gm_markov_lower(std::size_t k, double eps);

/// The default constant in exp(-k eps^2 / (c (1+eps))); 8 is proven for all
/// eps in [0,1], anything >= pi^2/2 is accepted (5 works at eps = 0.2).
struct GMConstant {
    double c = 8.0;

    void validate() const;
};

struct ExponentialBound {
    double upper = 1.0;
    double lower = 1.0;       // same value; only meaningful when valid
    bool lower_valid = false; // k >= pi^2/(1.5 eps)
};

ExponentialBound gm_exponential(std::size_t k, double eps,
                                GMConstant c = GMConstant{});

/// Everything about one (k, eps) pair: optimal-t Markov bounds plus the
/// validity flags for the lower-side preconditions.
struct TailBoundReport {
    double eps = 0.0;
    double upper = 1.0;
    double lower = 1.0;
    double t_upper = 0.0;
    double t_lower = 0.0;
    bool markov_valid_lower = false;       // k >= pi^2/(8 eps)
    bool exponential_valid_lower = false;  // k >= pi^2/(1.5 eps)
};

TailBoundReport gm_tail_report(std::size_t k, double eps);

struct PlanRequest {
    std::size_t n = 2;   // point count
    double eps = 0.5;    // relative error, (0,1] for l1
    double delta = 0.05; // failure probability
};

enum class BindingConstraint : std::uint8_t {
    jl_formula = 0,
    epsilon_floor = 1,
};

struct PlanResult {
    std::size_t k = 1;
    BindingConstraint binding = BindingConstraint::jl_formula;
};

/// k = ceil(max(8 (2 ln n - ln delta) / (eps^2/(1+eps)), pi^2/(1.5 eps))).
PlanResult plan_k_l1(const PlanRequest& req);

/// k = ceil((2 ln n - ln delta) / (eps^2/4 - eps^3/6)); eps < 1.5.
PlanResult plan_k_l2(const PlanRequest& req);

}  // namespace csk
