#pragma once

#include <cstddef>

namespace csk {

/// Standard normal CDF via the complementary error function; absolute error
/// below 1e-15 across the support.
double std_normal_cdf(double z);

/// log Phi(-z) for z >= 0, finite far beyond where Phi underflows
/// (asymptotic tail expansion past z = 30).
double log_std_normal_cdf_neg(double z);

/// exp(two_alpha) * Phi(-z) evaluated in log space; the factor exp(2*alpha)
/// overflows on its own for k >= ~200 while the product stays tiny.
double exp_scaled_normal_cdf_neg(double two_alpha, double z);

/// Regularized incomplete gamma P(a,x) and Q(a,x) = 1 - P(a,x)
/// (series + continued fraction).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

struct TailPair {
    double upper = 1.0;  // Pr(est >= (1+eps) d)
    double lower = 1.0;  // Pr(est <= (1-eps) d)
};

/// Gamma law matched to the first two asymptotic moments of the corrected
/// MLE: alpha*beta = d, alpha*beta^2 = 2d^2/k + 3d^2/k^2.
struct GammaParams {
    double alpha = 1.0;  // shape
    double beta = 1.0;   // scale
};

GammaParams gamma_fit(std::size_t k, double d);

/// Chernoff bounds under the gamma model; depend on k only.
TailPair gamma_chernoff(std::size_t k, double eps);

/// Exact tails of the fitted gamma law (scale-free in eps).
TailPair gamma_tail(std::size_t k, double eps);

/// Tails of the plain normal approximation with the same two moments;
/// the baseline the gamma is compared against.
TailPair normal_tail(std::size_t k, double eps);

/// Inverse Gaussian (generalized gamma with index eta = 2) matched to the
/// first three asymptotic moments of the corrected MLE.
struct IGParams {
    double alpha = 1.0;
    double beta = 1.0;
    double d = 1.0;      // mean, = alpha*beta
    double eta = 2.0;
};

IGParams ig_fit(std::size_t k, double d);

/// sqrt(alpha d / 2 pi) y^(-3/2) exp(-(y-d)^2 / (2 y beta)), y > 0.
double ig_density(double y, const IGParams& p);

/// Phi(sqrt(alpha d / y)(y/d - 1)) + e^(2 alpha) Phi(-sqrt(alpha d / y)(y/d + 1)),
/// with the second product evaluated in log space.
double ig_cdf(double y, const IGParams& p);

/// exp(alpha (1 - sqrt(1 - 2 beta t))), t <= 1/(2 beta).
double ig_mgf(double t, const IGParams& p);

/// Exact tails under the IG model; scale-free, d only validated.
TailPair ig_tail_exact(std::size_t k, double eps, double d = 1.0);

struct IGChernoff {
    double upper = 1.0;
    double lower = 1.0;
    double symmetric = 2.0;  // 2 exp(-(eps^2/(1+eps)) / (2 (2/k + 3/k^2)))
};

IGChernoff ig_chernoff(std::size_t k, double eps);

}  // namespace csk
