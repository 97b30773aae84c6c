#include <cmath>

#include "csk/bounds.hpp"
#include "csk/error.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace csk;
namespace ts = testsupport;

namespace {

constexpr double kPi = 3.14159265358979323846;

// the raw Markov objective at exponent t, for grid-optimality checks
double upper_objective(std::size_t k, double eps, double t) {
    const double dk = static_cast<double>(k);
    const double lc = std::log(std::cos(0.5 * kPi / dk));
    return std::exp(dk * t * lc - dk * std::log(std::cos(kPi * t / (2 * dk))) -
                    t * std::log1p(eps));
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("markov upper bound matches the high-precision reference") {
    const MarkovBound b = gm_markov_upper(50, 0.5);
    CHECK(b.t == doctest::Approx(ts::kT1_k50_e05).epsilon(1e-12));
    CHECK(b.bound == doctest::Approx(ts::kUpper_k50_e05).epsilon(1e-12));
}

TEST_CASE("markov upper at eps = 0: t* near 1/2 and bound below 1") {
    const MarkovBound b = gm_markov_upper(100, 0.0);
    CHECK(b.t == doctest::Approx(0.5).epsilon(0.01));
    CHECK(b.bound < 1.0);
    // small-eps expansion: bound ~ exp(-pi^2/(32k))
    CHECK(b.bound ==
          doctest::Approx(std::exp(-kPi * kPi / 3200.0)).epsilon(1e-3));
}

TEST_CASE("t1* is optimal on a grid and lies in [0, k)") {
    for (std::size_t k : {2u, 5u, 50u, 200u}) {
        for (double eps : {0.0, 0.1, 0.5, 1.0, 3.0, 10.0}) {
            const MarkovBound b = gm_markov_upper(k, eps);
            CHECK(b.t >= 0.0);
            CHECK(b.t < static_cast<double>(k));
            for (double frac : {0.1, 0.5, 0.9}) {
                const double t = frac * static_cast<double>(k);
                CHECK(b.bound <= upper_objective(k, eps, t) * (1 + 1e-12));
            }
        }
    }
}

TEST_CASE("markov lower bound: threshold, reference, eps = 1 limit") {
    try {
        gm_markov_lower(5, 0.1);  // pi^2/(8*0.1) = 12.34 > 5
        FAIL("expected threshold error");
    } catch (const Error& e) {
        CHECK(e.code() == errc::k_below_threshold);
    }
    CHECK_NOTHROW(gm_markov_lower(13, 0.1));

    const MarkovBound b = gm_markov_lower(100, 0.3);
    CHECK(b.t == doctest::Approx(ts::kT2_k100_e03).epsilon(1e-12));
    CHECK(b.bound == doctest::Approx(ts::kLower_k100_e03).epsilon(1e-12));

    const MarkovBound limit = gm_markov_lower(100, 1.0);
    CHECK(limit.bound == 0.0);
    CHECK(std::isfinite(limit.t));
}

TEST_CASE("exponential bounds and validity flags") {
    const ExponentialBound at0 = gm_exponential(100, 0.0);
    CHECK(at0.upper == 1.0);
    CHECK_FALSE(at0.lower_valid);

    const ExponentialBound b = gm_exponential(586, 0.5);
    CHECK(b.upper ==
          doctest::Approx(std::exp(-586.0 * 0.25 / 12.0)).epsilon(1e-12));
    CHECK(b.upper == doctest::Approx(4.9887093281349009e-6).epsilon(1e-10));
    CHECK(b.lower_valid);  // 586 >= pi^2/0.75

    CHECK_FALSE(gm_exponential(10, 0.5).lower_valid);  // 10 < 13.16
    CHECK(gm_exponential(14, 0.5).lower_valid);

    // the remark's smaller constant is accepted, below pi^2/2 is not
    CHECK_NOTHROW(gm_exponential(100, 0.2, {5.0}));
    CHECK_THROWS_AS(gm_exponential(100, 0.2, {4.0}), Error);
    CHECK_THROWS_AS(gm_exponential(100, 1.5), Error);
}

TEST_CASE("markov bounds dominate the exponential forms") {
    for (std::size_t k : {20u, 50u, 100u, 400u}) {
        for (double eps : {0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0}) {
            const ExponentialBound e = gm_exponential(k, eps);
            const MarkovBound upper = gm_markov_upper(k, eps);
            CHECK(upper.bound <= e.upper * (1 + 1e-12));
            if (static_cast<double>(k) >= kPi * kPi / (1.5 * eps)) {
                const MarkovBound lower = gm_markov_lower(k, eps);
                CHECK(lower.bound <= e.lower * (1 + 1e-12));
            }
        }
    }
}

TEST_CASE("tail report aggregates bounds with flags") {
    const TailBoundReport r = gm_tail_report(10, 0.5);
    CHECK(r.upper < 1.0);
    CHECK(r.t_upper > 0.0);
    // pi^2/(8*0.5) = 2.47 <= 10: markov lower valid
    CHECK(r.markov_valid_lower);
    // pi^2/(1.5*0.5) = 13.16 > 10: exponential lower not valid
    CHECK_FALSE(r.exponential_valid_lower);

    const TailBoundReport r0 = gm_tail_report(10, 0.0);
    CHECK_FALSE(r0.markov_valid_lower);
    CHECK(r0.lower == 1.0);  // vacuous
}

TEST_CASE("l1 plan: worked examples") {
    const PlanResult a = plan_k_l1({100, 0.5, 0.05});
    CHECK(a.k == 586);
    CHECK(a.binding == BindingConstraint::jl_formula);

    const PlanResult b = plan_k_l1({2, 1.0, 0.99});
    CHECK(b.k == 23);
    CHECK(b.binding == BindingConstraint::jl_formula);

    CHECK(plan_k_l1({10000, 0.5, 0.05}).k > plan_k_l1({100, 0.5, 0.05}).k);
    CHECK_THROWS_AS(plan_k_l1({1, 0.5, 0.05}), Error);
    CHECK_THROWS_AS(plan_k_l1({100, 0.0, 0.05}), Error);
    CHECK_THROWS_AS(plan_k_l1({100, 1.5, 0.05}), Error);
    CHECK_THROWS_AS(plan_k_l1({100, 0.5, 0.0}), Error);
    CHECK_THROWS_AS(plan_k_l1({100, 0.5, 1.0}), Error);
}

TEST_CASE("planned k always satisfies the lower-bound floor") {
    // For n >= 2 and eps <= 1 the JL term is at least 3.3x the
    // pi^2/(1.5 eps) floor, so jl_formula always binds; the max still
    // enforces the floor.
    for (double eps : {0.1, 0.5, 1.0}) {
        const PlanResult q = plan_k_l1({2, eps, 0.999999});
        CHECK(q.binding == BindingConstraint::jl_formula);
        CHECK(static_cast<double>(q.k) >= kPi * kPi / (1.5 * eps));
    }
}

TEST_CASE("l2 plan: worked examples and domain") {
    CHECK(plan_k_l2({100, 0.5, 0.05}).k == 293);
    // ratio l1/l2 at matched parameters is about 2 at eps = 0.5
    const double ratio =
        static_cast<double>(plan_k_l1({100, 0.5, 0.05}).k) /
        static_cast<double>(plan_k_l2({100, 0.5, 0.05}).k);
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.01));

    CHECK_NOTHROW(plan_k_l2({100, 1.4, 0.05}));
    CHECK_THROWS_AS(plan_k_l2({100, 1.5, 0.05}), Error);
    CHECK_THROWS_AS(plan_k_l2({100, 1.6, 0.05}), Error);
}

TEST_CASE("plans grow with n") {
    std::size_t prev = 0;
    for (std::size_t n : {10u, 100u, 1000u, 10000u}) {
        const std::size_t k = plan_k_l1({n, 0.3, 0.05}).k;
        CHECK(k > prev);
        prev = k;
    }
}

}  // TEST_SUITE
