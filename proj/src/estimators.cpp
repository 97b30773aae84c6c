#include "csk/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <vector>

#include "csk/quadrature.hpp"

namespace csk {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

thread_local std::vector<double> tl_abs_scratch;

void require_nonempty(std::span<const double> x) {
    if (x.empty()) fail(errc::empty_sample, "empty sample");
}

std::vector<double>& abs_values(std::span<const double> x) {
    auto& buf = tl_abs_scratch;
    buf.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) buf[i] = std::abs(x[i]);
    return buf;
}

double median_inplace(std::vector<double>& a) {
    const std::size_t k = a.size();
    const std::size_t mid = k / 2;
    std::nth_element(a.begin(), a.begin() + mid, a.end());
    if (k % 2 == 1) return a[mid];
    const double hi = a[mid];
    const double lo = *std::max_element(a.begin(), a.begin() + mid);
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Moments of the sample median of k = 2m+1 half-Cauchy variables:
//   E(median)^r / d^r = integral_0^1 C tan^r(pi t / 2) (t - t^2)^m dt,
//   C = (2m+1)!/(m!)^2   (finite only for m >= r).
// The coefficient is kept in log space (C overflows past m ~ 85) and the
// integrable endpoint blowup at t = 1 is split off analytically: on the
// last sliver of width h, tan(pi t/2) = (2/pi)/(1-t) * (1 + O((1-t)^2)) and
// (t - t^2)^m = (1-t)^m (1 - m(1-t) + ...), which integrates term by term.

constexpr double kSliver = 1e-6;

double median_moment_integral(std::size_t m, int r) {
    const double log_coeff =
        std::lgamma(2.0 * m + 2.0) - 2.0 * std::lgamma(m + 1.0);
    const auto integrand = [=](double t) {
        return std::exp(log_coeff + m * std::log(t - t * t)) *
               std::pow(std::tan(0.5 * kPi * t), r);
    };
    const double body =
        quad::integrate(integrand, 0.0, 1.0 - kSliver, 1e-12, 0.0);

    const double p = static_cast<double>(m) - r + 1.0;  // > 0 when m >= r
    const double log_lead = log_coeff + r * std::log(2.0 / kPi) +
                            p * std::log(kSliver);
    double tail = 0.0;
    if (log_lead > -740.0) {
        tail = std::exp(log_lead) *
               (1.0 / p - static_cast<double>(m) * kSliver / (p + 1.0));
    }
    return body + tail;
}

std::size_t half_width_m(std::size_t k, errc even_code) {
    if (k % 2 == 0) {
        fail(even_code, "defined only for odd k, got k=" + std::to_string(k));
    }
    return (k - 1) / 2;
}

struct MedianMomentCache {
    std::mutex mutex;
    std::map<std::size_t, double> bias;        // k -> b_me
    std::map<std::size_t, double> second;      // k -> E(me^2)/d^2
};

MedianMomentCache& median_cache() {
    static MedianMomentCache cache;
    return cache;
}

double cached_median_moment(std::size_t k, int r) {
    auto& cache = median_cache();
    auto& map = (r == 1) ? cache.bias : cache.second;
    {
        std::lock_guard<std::mutex> lock(cache.mutex);
        auto it = map.find(k);
        if (it != map.end()) return it->second;
    }
    const std::size_t m = half_width_m(k, errc::even_k);
    const double value = median_moment_integral(m, r);
    std::lock_guard<std::mutex> lock(cache.mutex);
    auto [it, inserted] = map.emplace(k, value);
    return it->second;  // first computation wins; recomputation is identical
}

}  // namespace

double median_bias_factor(std::size_t k) {
    if (k == 1) {
        fail(errc::infinite_bias, "b_me is infinite at k=1");
    }
    half_width_m(k, errc::even_k);
    return cached_median_moment(k, 1);
}

BiasTable& BiasTable::instance() {
    static BiasTable table;
    return table;
}

double BiasTable::bias(std::size_t k) { return median_bias_factor(k); }

double BiasTable::variance_factor(std::size_t k) {
    const std::size_t m = half_width_m(k, errc::even_k);
    if (m < 1) fail(errc::infinite_bias, "undefined at k=1");
    if (m < 2) return kInf;  // k = 3: second moment diverges
    const double b = cached_median_moment(k, 1);
    const double second = cached_median_moment(k, 2);
    return second / (b * b) - 1.0;
}

void write_bias_table_csv(std::ostream& out, std::size_t max_k,
                          const std::string& provenance) {
    out << "# cauchysketch bias-table max_k=" << max_k;
    if (!provenance.empty()) out << ' ' << provenance;
    out << '\n';
    out << "k,b_me,var_factor\n";
    char buf[64];
    auto& table = BiasTable::instance();
    for (std::size_t k = 3; k <= max_k; k += 2) {
        const double b = table.bias(k);
        const double v = table.variance_factor(k);
        std::snprintf(buf, sizeof buf, "%zu,%.12g,", k, b);
        out << buf;
        if (std::isinf(v)) {
            out << "inf\n";
        } else {
            std::snprintf(buf, sizeof buf, "%.12g\n", v);
            out << buf;
        }
    }
}

// ---------------------------------------------------------------------------
// Estimators

Estimate estimate_median(std::span<const double> x) {
    require_nonempty(x);
    auto& a = abs_values(x);
    return {median_inplace(a), EstimatorKind::me, x.size(), false};
}

Estimate estimate_median_corrected(std::span<const double> x) {
    require_nonempty(x);
    const double b = median_bias_factor(x.size());
    auto& a = abs_values(x);
    return {median_inplace(a) / b, EstimatorKind::me_c, x.size(), false};
}

Estimate estimate_gm(std::span<const double> x) {
    if (x.size() < 2) {
        fail(errc::k_too_small,
             "geometric mean estimator needs k >= 2, got k=" +
                 std::to_string(x.size()));
    }
    const std::size_t k = x.size();
    double log_sum = 0.0;
    for (double v : x) {
        if (v == 0.0) return {0.0, EstimatorKind::gm_c, k, false};
        log_sum += std::log(std::abs(v));
    }
    const double log_bias = k * std::log(std::cos(0.5 * kPi / k));
    return {std::exp(log_bias + log_sum / k), EstimatorKind::gm_c, k, false};
}

Estimate estimate_fractional(std::span<const double> x,
                             FractionalOptions opts) {
    require_nonempty(x);
    const double lambda = opts.lambda;
    if (!(std::abs(lambda) < 1.0) || lambda == 0.0) {
        fail(errc::lambda_out_of_range,
             "lambda must satisfy 0 < |lambda| < 1, got " +
                 std::to_string(lambda));
    }
    double sum = 0.0;
    for (double v : x) {
        const double a = std::abs(v);
        if (a == 0.0 && lambda < 0.0) {
            fail(errc::zero_sample_with_negative_lambda,
                 "zero sample with negative lambda");
        }
        sum += std::pow(a, lambda);
    }
    const double mean = sum / static_cast<double>(x.size());
    const double value =
        std::pow(mean * std::cos(lambda * kPi / 2.0), 1.0 / lambda);
    return {value, EstimatorKind::frac, x.size(), false};
}

namespace {

struct MleSample {
    const std::vector<double>* squares;
    double min_nonzero_abs = kInf;
    double max_abs = 0.0;
    bool any_zero = false;
    bool all_zero = true;
};

thread_local std::vector<double> tl_square_scratch;

MleSample prepare_mle(std::span<const double> x) {
    MleSample s;
    auto& sq = tl_square_scratch;
    sq.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = std::abs(x[i]);
        sq[i] = a * a;
        if (a == 0.0) {
            s.any_zero = true;
        } else {
            s.all_zero = false;
            s.min_nonzero_abs = std::min(s.min_nonzero_abs, a);
            s.max_abs = std::max(s.max_abs, a);
        }
    }
    s.squares = &sq;
    return s;
}

// g(d) = k - sum 2 d^2/(x_j^2 + d^2): strictly decreasing from k at d=0+ to
// -k as d -> inf, so the MLE root is unique. Also accumulates
// g'(d) = -(4/d) sum t (1 - t), t = d^2/(x_j^2 + d^2).
void mle_g(const std::vector<double>& squares, double d, double& g,
           double& gprime) {
    const double d2 = d * d;
    double sum_t = 0.0;
    double sum_tp = 0.0;
    for (double x2 : squares) {
        const double t = d2 / (x2 + d2);
        sum_t += t;
        sum_tp += t * (1.0 - t);
    }
    g = static_cast<double>(squares.size()) - 2.0 * sum_t;
    gprime = -4.0 * sum_tp / d;
}

double mle_root(std::span<const double> x, const MleSample& s,
                double start) {
    const auto& squares = *s.squares;
    const double k = static_cast<double>(x.size());
    double lo = s.min_nonzero_abs * 1e-3;
    double hi = s.max_abs * 1e3;

    double g, gp;
    // expand the bracket geometrically if the root escaped it
    for (int i = 0; i < 200; ++i) {
        mle_g(squares, lo, g, gp);
        if (g > 0.0) break;
        lo *= 1e-3;
    }
    for (int i = 0; i < 200; ++i) {
        mle_g(squares, hi, g, gp);
        if (g < 0.0) break;
        hi *= 1e3;
    }

    double d = std::clamp(start, lo, hi);
    const double residual_limit = k * 1e-10;
    for (int iter = 0; iter < 200; ++iter) {
        mle_g(squares, d, g, gp);
        if (g > 0.0) {
            lo = d;
        } else if (g < 0.0) {
            hi = d;
        }
        double next = d - g / gp;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);  // bisection fallback
        }
        const double step = std::abs(next - d);
        d = next;
        if (step <= 1e-13 * d) {
            mle_g(squares, d, g, gp);
            if (std::abs(g) <= residual_limit) return d;
        }
    }
    fail(errc::no_convergence, "MLE solver did not converge");
}

}  // namespace

Estimate estimate_mle_raw(std::span<const double> x) {
    require_nonempty(x);
    const MleSample s = prepare_mle(x);
    if (s.all_zero) {
        return {0.0, EstimatorKind::mle, x.size(), true};
    }
    double start;
    if (s.any_zero || x.size() < 2) {
        auto& a = abs_values(x);
        start = median_inplace(a);
        if (start <= 0.0) start = s.min_nonzero_abs;
    } else {
        start = estimate_gm(x).value;
    }
    return {mle_root(x, s, start), EstimatorKind::mle, x.size(), false};
}

Estimate estimate_mle_corrected(std::span<const double> x) {
    if (x.size() < 2) {
        fail(errc::k_too_small,
             "corrected MLE needs k >= 2, got k=" + std::to_string(x.size()));
    }
    Estimate raw = estimate_mle_raw(x);
    raw.kind = EstimatorKind::mle_c;
    raw.value *= 1.0 - 1.0 / static_cast<double>(x.size());
    return raw;
}

Estimate estimate_quantile_or(std::span<const double> x) {
    if (x.size() < 4) {
        fail(errc::k_too_small, "quantile estimator needs k >= 4, got k=" +
                                    std::to_string(x.size()));
    }
    auto& a = abs_values(x);
    std::sort(a.begin(), a.end());
    const auto quantile = [&](double p) {
        const double pos = p * static_cast<double>(a.size() - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        if (i + 1 >= a.size()) return a.back();
        return a[i] + frac * (a[i + 1] - a[i]);
    };
    const double value = (quantile(0.75) - quantile(0.25)) / 2.0;
    return {value, EstimatorKind::or_quantile, x.size(), false};
}

Estimate estimate_l2_squared(std::span<const double> x) {
    require_nonempty(x);
    double sum = 0.0;
    for (double v : x) sum += v * v;
    return {sum / static_cast<double>(x.size()), EstimatorKind::l2sq,
            x.size(), false};
}

Estimate apply_estimator(EstimatorKind kind, std::span<const double> x,
                         double lambda) {
    switch (kind) {
        case EstimatorKind::me: return estimate_median(x);
        case EstimatorKind::me_c: return estimate_median_corrected(x);
        case EstimatorKind::gm_c: return estimate_gm(x);
        case EstimatorKind::frac: return estimate_fractional(x, {lambda});
        case EstimatorKind::mle: return estimate_mle_raw(x);
        case EstimatorKind::mle_c: return estimate_mle_corrected(x);
        case EstimatorKind::or_quantile: return estimate_quantile_or(x);
        case EstimatorKind::l2sq: return estimate_l2_squared(x);
    }
    fail(errc::unsupported_kind, "unknown estimator kind");
}

// ---------------------------------------------------------------------------
// Closed-form moments

namespace {

double gm_variance_factor(std::size_t k) {
    // cos^2k(pi/2k) / cos^k(pi/k) - 1, in log space
    const double num = 2.0 * k * std::log(std::cos(0.5 * kPi / k));
    const double den = k * std::log(std::cos(kPi / k));
    return std::expm1(num - den);
}

}  // namespace

MomentSummary theoretical_moments(EstimatorKind kind, std::size_t k,
                                  double d) {
    if (!(d > 0.0)) {
        fail(errc::param_out_of_range, "theoretical moments need d > 0");
    }
    const double dk = static_cast<double>(k);
    MomentSummary m;
    switch (kind) {
        case EstimatorKind::me_c: {
            half_width_m(k, errc::even_k);
            if (k < 3) fail(errc::infinite_bias, "me_c undefined at k=1");
            m.mean = {d, Exactness::exact};
            if (k == 3) {
                m.variance = {kInf, Exactness::infinite};
            } else {
                m.variance = {d * d * BiasTable::instance().variance_factor(k),
                              Exactness::exact};
            }
            m.mu3 = {0.0, Exactness::unavailable};
            m.mu4 = {0.0, Exactness::unavailable};
            return m;
        }
        case EstimatorKind::gm_c: {
            if (k < 2) fail(errc::k_too_small, "gm_c needs k >= 2");
            m.mean = {d, Exactness::exact};
            // E(gm_c^t) is infinite for t >= k, so each central moment needs
            // k strictly above its order
            if (k > 2) {
                m.variance = {d * d * gm_variance_factor(k), Exactness::exact};
            } else {
                m.variance = {kInf, Exactness::infinite};
            }
            if (k > 3) {
                m.mu3 = {3.0 * std::pow(kPi, 4) * d * d * d / (16.0 * dk * dk),
                         Exactness::asymptotic};
            } else {
                m.mu3 = {kInf, Exactness::infinite};
            }
            if (k > 4) {
                m.mu4 = {3.0 * std::pow(kPi, 4) * std::pow(d, 4) /
                             (16.0 * dk * dk),
                         Exactness::asymptotic};
            } else {
                m.mu4 = {kInf, Exactness::infinite};
            }
            return m;
        }
        case EstimatorKind::mle: {
            if (k < 1) fail(errc::k_too_small, "mle needs k >= 1");
            m.mean = {d + d / dk, Exactness::asymptotic};
            m.variance = {2.0 * d * d / dk + 7.0 * d * d / (dk * dk),
                          Exactness::asymptotic};
            m.mu3 = {12.0 * d * d * d / (dk * dk), Exactness::asymptotic};
            m.mu4 = {12.0 * std::pow(d, 4) / (dk * dk) +
                         222.0 * std::pow(d, 4) / (dk * dk * dk),
                     Exactness::asymptotic};
            return m;
        }
        case EstimatorKind::mle_c: {
            if (k < 2) fail(errc::k_too_small, "mle_c needs k >= 2");
            m.mean = {d, Exactness::asymptotic};
            m.variance = {2.0 * d * d / dk + 3.0 * d * d / (dk * dk),
                          Exactness::asymptotic};
            m.mu3 = {12.0 * d * d * d / (dk * dk), Exactness::asymptotic};
            m.mu4 = {12.0 * std::pow(d, 4) / (dk * dk) +
                         186.0 * std::pow(d, 4) / (dk * dk * dk),
                     Exactness::asymptotic};
            return m;
        }
        default:
            fail(errc::unsupported_kind,
                 "theoretical moments available for me_c, gm_c, mle, mle_c");
    }
}

}  // namespace csk
