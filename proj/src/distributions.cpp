#include "csk/distributions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "csk/error.hpp"

namespace csk {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log sqrt(2 pi)

void require_k(std::size_t k) {
    if (k < 1) fail(errc::param_out_of_range, "k must be >= 1");
}

void require_d(double d) {
    if (!(d > 0.0)) fail(errc::param_out_of_range, "d must be > 0");
}

double fitted_alpha(std::size_t k) {
    const double dk = static_cast<double>(k);
    return 1.0 / (2.0 / dk + 3.0 / (dk * dk));
}

}  // namespace

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double log_std_normal_cdf_neg(double z) {
    if (std::isinf(z)) {
        return z > 0 ? -std::numeric_limits<double>::infinity() : 0.0;
    }
    if (z < 30.0) {
        // erfc stays normal down to ~1e-197 here; take the log directly
        return std::log(0.5 * std::erfc(z / kSqrt2));
    }
    // Phi(-z) = phi(z)/z * (1 - 1/z^2 + 3/z^4 - 15/z^6 + 105/z^8 - ...)
    const double w = 1.0 / (z * z);
    const double series =
        1.0 + w * (-1.0 + w * (3.0 + w * (-15.0 + w * (105.0 - 945.0 * w))));
    return -0.5 * z * z - std::log(z) - kLogSqrt2Pi + std::log(series);
}

double exp_scaled_normal_cdf_neg(double two_alpha, double z) {
    return std::exp(two_alpha + log_std_normal_cdf_neg(z));
}

// ---------------------------------------------------------------------------
// Regularized incomplete gamma: series for x < a+1, Lentz continued fraction
// otherwise.

namespace {

double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    fail(errc::no_convergence, "incomplete gamma series did not converge");
}

double gamma_q_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    fail(errc::no_convergence,
         "incomplete gamma continued fraction did not converge");
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) {
        fail(errc::param_out_of_range, "gamma_p needs a > 0, x >= 0");
    }
    if (x == 0.0) return 0.0;
    return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) {
        fail(errc::param_out_of_range, "gamma_q needs a > 0, x >= 0");
    }
    if (x == 0.0) return 1.0;
    return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

// ---------------------------------------------------------------------------
// Gamma approximation of the corrected MLE

GammaParams gamma_fit(std::size_t k, double d) {
    require_k(k);
    require_d(d);
    const double dk = static_cast<double>(k);
    return {fitted_alpha(k), 2.0 * d / dk + 3.0 * d / (dk * dk)};
}

namespace {

void require_eps(double eps) {
    if (!(eps >= 0.0) || std::isinf(eps)) {
        fail(errc::epsilon_out_of_range, "eps must be finite and >= 0");
    }
}

}  // namespace

TailPair gamma_chernoff(std::size_t k, double eps) {
    require_k(k);
    require_eps(eps);
    const double alpha = fitted_alpha(k);
    TailPair out;
    out.upper = std::exp(-alpha * (eps - std::log1p(eps)));
    // the lower side is 0 exactly from eps = 1 on: the variable is positive
    out.lower =
        eps >= 1.0 ? 0.0 : std::exp(-alpha * (-eps - std::log1p(-eps)));
    return out;
}

TailPair gamma_tail(std::size_t k, double eps) {
    require_k(k);
    require_eps(eps);
    const double alpha = fitted_alpha(k);
    TailPair out;
    out.upper = regularized_gamma_q(alpha, (1.0 + eps) * alpha);
    out.lower =
        eps >= 1.0 ? 0.0 : regularized_gamma_p(alpha, (1.0 - eps) * alpha);
    return out;
}

TailPair normal_tail(std::size_t k, double eps) {
    require_k(k);
    if (!(eps >= 0.0)) {
        fail(errc::epsilon_out_of_range, "normal tails need eps >= 0");
    }
    const double z = eps * std::sqrt(fitted_alpha(k));
    return {std_normal_cdf(-z), std_normal_cdf(-z)};
}

// ---------------------------------------------------------------------------
// Inverse Gaussian approximation

IGParams ig_fit(std::size_t k, double d) {
    require_k(k);
    require_d(d);
    const double dk = static_cast<double>(k);
    IGParams p;
    p.alpha = fitted_alpha(k);
    p.beta = 2.0 * d / dk + 3.0 * d / (dk * dk);
    p.d = d;
    p.eta = 2.0;
    return p;
}

double ig_density(double y, const IGParams& p) {
    if (!(y > 0.0)) {
        fail(errc::param_out_of_range, "IG density needs y > 0");
    }
    const double z = y - p.d;
    return std::sqrt(p.alpha * p.d / (2.0 * kPi)) * std::pow(y, -1.5) *
           std::exp(-z * z / (2.0 * y * p.beta));
}

double ig_cdf(double y, const IGParams& p) {
    if (!(y > 0.0)) {
        fail(errc::param_out_of_range, "IG cdf needs y > 0");
    }
    const double root = std::sqrt(p.alpha * p.d / y);
    const double first = std_normal_cdf(root * (y / p.d - 1.0));
    const double second =
        exp_scaled_normal_cdf_neg(2.0 * p.alpha, root * (y / p.d + 1.0));
    return first + second;
}

double ig_mgf(double t, const IGParams& p) {
    const double radicand = 1.0 - 2.0 * p.beta * t;
    if (radicand < 0.0) {
        fail(errc::param_out_of_range, "IG mgf needs t <= 1/(2 beta)");
    }
    return std::exp(p.alpha * (1.0 - std::sqrt(radicand)));
}

TailPair ig_tail_exact(std::size_t k, double eps, double d) {
    require_k(k);
    require_d(d);
    require_eps(eps);
    const double alpha = fitted_alpha(k);
    TailPair out;
    {
        const double s = std::sqrt(alpha / (1.0 + eps));
        out.upper = std_normal_cdf(-eps * s) -
                    exp_scaled_normal_cdf_neg(2.0 * alpha, (2.0 + eps) * s);
    }
    if (eps >= 1.0) {
        out.lower = 0.0;
    } else {
        const double s = std::sqrt(alpha / (1.0 - eps));
        out.lower = std_normal_cdf(-eps * s) +
                    exp_scaled_normal_cdf_neg(2.0 * alpha, (2.0 - eps) * s);
    }
    return out;
}

IGChernoff ig_chernoff(std::size_t k, double eps) {
    require_k(k);
    require_eps(eps);
    const double alpha = fitted_alpha(k);
    IGChernoff out;
    out.upper = std::exp(-alpha * eps * eps / (2.0 * (1.0 + eps)));
    out.lower =
        eps >= 1.0 ? 0.0 : std::exp(-alpha * eps * eps / (2.0 * (1.0 - eps)));
    out.symmetric = 2.0 * out.upper;
    return out;
}

}  // namespace csk
