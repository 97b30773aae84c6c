#pragma once

#include <cstddef>
#include <functional>

namespace csk::quad {

/// Composite Gauss-Legendre on [a,b]: `panels` equal subintervals, 20 nodes
/// each. Deterministic; doubles panels via `integrate` below.
double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, std::size_t panels);

/// Panel-doubling Gauss-Legendre until successive composite values agree to
/// rel_tol (or abs_tol for integrals near zero).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double abs_tol = 0.0);

/// Adaptive Gauss-Kronrod 7-15 with interval bisection; suited to smooth
/// integrands with localized features (used for density normalization and
/// moment checks).
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-10,
                          double abs_tol = 1e-14);

}  // namespace csk::quad
