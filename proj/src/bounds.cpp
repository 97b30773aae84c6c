#include "csk/bounds.hpp"

#include <cmath>
#include <string>

#include "csk/error.hpp"

namespace csk {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPiSq = kPi * kPi;

void require_gm_k(std::size_t k) {
    if (k < 2) {
        fail(errc::k_too_small, "geometric-mean bounds need k >= 2");
    }
}

double log_cos_half_pi_over(std::size_t k) {
    return std::log(std::cos(0.5 * kPi / static_cast<double>(k)));
}

}  // namespace

MarkovBound gm_markov_upper(std::size_t k, double eps) {
    require_gm_k(k);
    if (!(eps >= 0.0) || std::isinf(eps)) {
        fail(errc::epsilon_out_of_range, "upper bound needs eps >= 0");
    }
    const double dk = static_cast<double>(k);
    const double lc = log_cos_half_pi_over(k);  // log cos(pi/2k), negative
    const double t =
        (2.0 * dk / kPi) *
        std::atan((std::log1p(eps) - dk * lc) * 2.0 / kPi);
    const double log_bound = dk * t * lc -
                             dk * std::log(std::cos(kPi * t / (2.0 * dk))) -
                             t * std::log1p(eps);
    return {std::exp(log_bound), t};
}

MarkovBound gm_markov_lower(std::size_t k, double eps) {
    require_gm_k(k);
    if (!(eps >= 0.0) || eps > 1.0) {
        fail(errc::epsilon_out_of_range, "lower bound needs 0 <= eps <= 1");
    }
    const double dk = static_cast<double>(k);
    if (!(dk >= kPiSq / (8.0 * eps))) {
        fail(errc::k_below_threshold,
             "lower Markov bound needs k >= pi^2/(8 eps) = " +
                 std::to_string(kPiSq / (8.0 * eps)));
    }
    const double lc = log_cos_half_pi_over(k);
    if (eps == 1.0) {
        // (1-eps)^t = 0 while t2* stays finite (= k in the limit)
        return {0.0, dk};
    }
    const double t =
        (2.0 * dk / kPi) *
        std::atan((-std::log1p(-eps) + dk * lc) * 2.0 / kPi);
    const double log_bound = t * std::log1p(-eps) -
                             dk * std::log(std::cos(kPi * t / (2.0 * dk))) -
                             dk * t * lc;
    return {std::exp(log_bound), t};
}

void GMConstant::validate() const {
    if (!(c >= kPiSq / 2.0)) {
        fail(errc::constant_too_small,
             "exponential-bound constant must be >= pi^2/2, got " +
                 std::to_string(c));
    }
}

ExponentialBound gm_exponential(std::size_t k, double eps, GMConstant c) {
    require_gm_k(k);
    c.validate();
    if (!(eps >= 0.0) || eps > 1.0) {
        fail(errc::epsilon_out_of_range,
             "exponential bounds need 0 <= eps <= 1");
    }
    const double dk = static_cast<double>(k);
    ExponentialBound out;
    out.upper = std::exp(-dk * eps * eps / (c.c * (1.0 + eps)));
    out.lower = out.upper;
    out.lower_valid = eps > 0.0 && dk >= kPiSq / (1.5 * eps);
    return out;
}

TailBoundReport gm_tail_report(std::size_t k, double eps) {
    require_gm_k(k);
    TailBoundReport report;
    report.eps = eps;
    const MarkovBound upper = gm_markov_upper(k, eps);
    report.upper = upper.bound;
    report.t_upper = upper.t;
    report.markov_valid_lower =
        eps > 0.0 && eps <= 1.0 &&
        static_cast<double>(k) >= kPiSq / (8.0 * eps);
    report.exponential_valid_lower =
        eps > 0.0 && eps <= 1.0 &&
        static_cast<double>(k) >= kPiSq / (1.5 * eps);
    if (report.markov_valid_lower) {
        const MarkovBound lower = gm_markov_lower(k, eps);
        report.lower = lower.bound;
        report.t_lower = lower.t;
    } else {
        report.lower = 1.0;  // vacuous
        report.t_lower = 0.0;
    }
    return report;
}

namespace {

void validate_plan(const PlanRequest& req, double eps_max) {
    if (req.n < 2) {
        fail(errc::param_out_of_range, "plan needs n >= 2");
    }
    if (!(req.eps > 0.0) || !(req.eps < eps_max)) {
        fail(errc::param_out_of_range,
             "plan eps out of range (0, " + std::to_string(eps_max) + ")");
    }
    if (!(req.delta > 0.0) || !(req.delta < 1.0)) {
        fail(errc::param_out_of_range, "plan delta out of range (0, 1)");
    }
}

}  // namespace

PlanResult plan_k_l1(const PlanRequest& req) {
    if (req.n < 2) fail(errc::param_out_of_range, "plan needs n >= 2");
    if (!(req.eps > 0.0) || req.eps > 1.0) {
        fail(errc::param_out_of_range, "l1 plan eps out of range (0, 1]");
    }
    if (!(req.delta > 0.0) || !(req.delta < 1.0)) {
        fail(errc::param_out_of_range, "plan delta out of range (0, 1)");
    }
    const double n = static_cast<double>(req.n);
    const double jl = 8.0 * (2.0 * std::log(n) - std::log(req.delta)) /
                      (req.eps * req.eps / (1.0 + req.eps));
    const double floor_term = kPiSq / (1.5 * req.eps);
    PlanResult out;
    if (jl >= floor_term) {
        out.binding = BindingConstraint::jl_formula;
        out.k = static_cast<std::size_t>(std::ceil(jl));
    } else {
        out.binding = BindingConstraint::epsilon_floor;
        out.k = static_cast<std::size_t>(std::ceil(floor_term));
    }
    return out;
}

PlanResult plan_k_l2(const PlanRequest& req) {
    validate_plan(req, 1.5);
    const double denom =
        req.eps * req.eps / 4.0 - req.eps * req.eps * req.eps / 6.0;
    if (!(denom > 0.0)) {
        fail(errc::param_out_of_range, "l2 plan denominator must be positive");
    }
    const double n = static_cast<double>(req.n);
    const double k = (2.0 * std::log(n) - std::log(req.delta)) / denom;
    return {static_cast<std::size_t>(std::ceil(k)),
            BindingConstraint::jl_formula};
}

}  // namespace csk
