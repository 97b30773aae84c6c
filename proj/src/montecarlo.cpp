#include "csk/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "csk/estimators.hpp"
#include "csk/parallel.hpp"
#include "csk/rng.hpp"

namespace csk::mc {

namespace {

constexpr std::uint64_t kMinReplicates = 1000;

std::size_t min_k_for(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::me: return 1;
        case EstimatorKind::me_c: return 3;
        case EstimatorKind::gm_c: return 2;
        case EstimatorKind::frac: return 1;
        case EstimatorKind::mle: return 1;
        case EstimatorKind::mle_c: return 2;
        case EstimatorKind::or_quantile: return 4;
        case EstimatorKind::l2sq: return 1;
    }
    return 1;
}

}  // namespace

void SimSpec::validate() const {
    if (replicates < kMinReplicates) {
        fail(errc::invalid_spec, "simulation needs at least " +
                                     std::to_string(kMinReplicates) +
                                     " replicates");
    }
    if (!(d > 0.0)) {
        fail(errc::invalid_spec, "simulation scale d must be positive");
    }
    if (k < min_k_for(estimator)) {
        fail(errc::invalid_spec,
             std::string("k too small for estimator ") +
                 estimator_name(estimator));
    }
    if (estimator == EstimatorKind::me_c && k % 2 == 0) {
        fail(errc::invalid_spec, "me_c needs odd k");
    }
    if (estimator == EstimatorKind::frac &&
        (!(std::abs(lambda) < 1.0) || lambda == 0.0)) {
        fail(errc::invalid_spec, "frac estimator needs 0 < |lambda| < 1");
    }
    for (double eps : eps_grid) {
        if (!(eps >= 0.0) || eps > 1.0) {
            fail(errc::invalid_spec, "eps grid must lie in [0, 1]");
        }
    }
}

double replicate_estimate(const SimSpec& spec, std::uint64_t r,
                          std::vector<double>& scratch) {
    scratch.resize(spec.k);
    if (spec.estimator == EstimatorKind::l2sq) {
        const double sigma = std::sqrt(spec.d);
        for (std::size_t j = 0; j < spec.k; ++j) {
            scratch[j] = sigma * normal_entry({spec.seed, r, j});
        }
    } else {
        for (std::size_t j = 0; j < spec.k; ++j) {
            scratch[j] =
                spec.d * cauchy_inverse_cdf(uniform01({spec.seed, r, j}));
        }
    }
    return apply_estimator(spec.estimator, scratch, spec.lambda).value;
}

std::vector<double> simulate_estimates(const SimSpec& spec, unsigned threads) {
    spec.validate();
    std::vector<double> values(spec.replicates);
    parallel_for(spec.replicates, threads,
                 [&](std::size_t lo, std::size_t hi) {
                     std::vector<double> scratch(spec.k);
                     for (std::size_t r = lo; r < hi; ++r) {
                         values[r] = replicate_estimate(spec, r, scratch);
                     }
                 });
    return values;
}

// ---------------------------------------------------------------------------
// Moments with delete-block jackknife

namespace {

struct PowerSums {
    double t1 = 0, t2 = 0, t3 = 0, t4 = 0;
    std::uint64_t n = 0;
};

struct CentralMoments {
    double mean_shift, var, mu3, mu4;
};

CentralMoments central_from_sums(const PowerSums& s) {
    const double n = static_cast<double>(s.n);
    const double m1 = s.t1 / n;
    CentralMoments c{};
    c.mean_shift = m1;
    c.var = s.t2 / n - m1 * m1;
    c.mu3 = s.t3 / n - 3.0 * m1 * s.t2 / n + 2.0 * m1 * m1 * m1;
    c.mu4 = s.t4 / n - 4.0 * m1 * s.t3 / n + 6.0 * m1 * m1 * s.t2 / n -
            3.0 * m1 * m1 * m1 * m1;
    return c;
}

}  // namespace

SimMoments moments_of(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < kMinReplicates) {
        fail(errc::invalid_spec, "too few values for moment summary");
    }
    // pass 1: compensated global mean
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    const double mean = (sum + comp) / static_cast<double>(n);

    // pass 2: per-block sums of powers of deviations from the global mean
    const std::size_t blocks = 100;
    std::vector<PowerSums> block_sums(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t lo = b * n / blocks;
        const std::size_t hi = (b + 1) * n / blocks;
        PowerSums& s = block_sums[b];
        for (std::size_t i = lo; i < hi; ++i) {
            const double y = values[i] - mean;
            const double y2 = y * y;
            s.t1 += y;
            s.t2 += y2;
            s.t3 += y2 * y;
            s.t4 += y2 * y2;
        }
        s.n = hi - lo;
    }
    PowerSums total;
    for (const auto& s : block_sums) {
        total.t1 += s.t1;
        total.t2 += s.t2;
        total.t3 += s.t3;
        total.t4 += s.t4;
        total.n += s.n;
    }

    const CentralMoments full = central_from_sums(total);

    // delete-block replicates
    std::array<std::vector<double>, 4> jack;
    for (auto& v : jack) v.reserve(blocks);
    for (const auto& s : block_sums) {
        PowerSums rest{total.t1 - s.t1, total.t2 - s.t2, total.t3 - s.t3,
                       total.t4 - s.t4, total.n - s.n};
        const CentralMoments c = central_from_sums(rest);
        jack[0].push_back(mean + c.mean_shift);
        jack[1].push_back(c.var);
        jack[2].push_back(c.mu3);
        jack[3].push_back(c.mu4);
    }
    const auto jack_se = [&](const std::vector<double>& reps) {
        double m = 0.0;
        for (double v : reps) m += v;
        m /= static_cast<double>(reps.size());
        double ss = 0.0;
        for (double v : reps) ss += (v - m) * (v - m);
        const double b = static_cast<double>(reps.size());
        return std::sqrt((b - 1.0) / b * ss);
    };

    SimMoments out;
    out.mean = {mean + full.mean_shift, jack_se(jack[0])};
    out.variance = {full.var, jack_se(jack[1])};
    out.mu3 = {full.mu3, jack_se(jack[2])};
    out.mu4 = {full.mu4, jack_se(jack[3])};
    return out;
}

SimMoments run_moments(const SimSpec& spec, unsigned threads) {
    return moments_of(simulate_estimates(spec, threads));
}

// ---------------------------------------------------------------------------
// Tail curves

TailCurve run_tail_curve(const SimSpec& spec, unsigned threads) {
    if (spec.eps_grid.empty()) {
        fail(errc::invalid_spec, "tail run needs a nonempty eps grid");
    }
    const std::vector<double> values = simulate_estimates(spec, threads);
    const double r = static_cast<double>(spec.replicates);

    TailCurve curve;
    curve.spec = spec;
    for (double eps : spec.eps_grid) {
        TailPoint pt;
        pt.eps = eps;
        const double up_threshold = (1.0 + eps) * spec.d;
        const double lo_threshold = (1.0 - eps) * spec.d;
        for (double v : values) {
            if (v >= up_threshold) ++pt.upper_hits;
            if (v <= lo_threshold) ++pt.lower_hits;
        }
        pt.upper_p = static_cast<double>(pt.upper_hits) / r;
        pt.lower_p = static_cast<double>(pt.lower_hits) / r;
        pt.upper_se = std::sqrt(pt.upper_p * (1.0 - pt.upper_p) / r);
        pt.lower_se = std::sqrt(pt.lower_p * (1.0 - pt.lower_p) / r);
        pt.low_confidence_upper = pt.upper_hits < 100;
        pt.low_confidence_lower = pt.lower_hits < 100;

        if (spec.estimator == EstimatorKind::gm_c) {
            GmBoundColumns gm;
            gm.markov = gm_tail_report(spec.k, eps);
            gm.exponential = gm_exponential(spec.k, eps);
            pt.gm = gm;
        } else if (spec.estimator == EstimatorKind::mle ||
                   spec.estimator == EstimatorKind::mle_c) {
            MleBoundColumns mle;
            mle.gamma_exact = gamma_tail(spec.k, eps);
            mle.gamma_chern = gamma_chernoff(spec.k, eps);
            mle.ig_exact = ig_tail_exact(spec.k, eps, spec.d);
            const IGChernoff chern = ig_chernoff(spec.k, eps);
            mle.ig_chern_upper = chern.upper;
            mle.ig_chern_lower = chern.lower;
            mle.ig_chern_symmetric = chern.symmetric;
            mle.normal = normal_tail(spec.k, eps);
            pt.mle = mle;
        }
        curve.points.push_back(pt);
    }
    return curve;
}

// ---------------------------------------------------------------------------
// MSE ratio table (common random numbers across the three estimators)

std::vector<MseRow> run_mse_ratios(std::span<const std::size_t> k_list,
                                   std::uint64_t replicates,
                                   std::uint64_t seed, unsigned threads) {
    if (replicates < kMinReplicates) {
        fail(errc::invalid_spec, "mse run needs more replicates");
    }
    std::vector<MseRow> rows;
    for (std::size_t k : k_list) {
        MseRow row;
        row.k = k;
        if (k % 2 == 0 || k < 3) {
            row.status = MseStatus::invalid_k;
            rows.push_back(row);
            continue;
        }
        if (k == 3) {
            // MSE(me) and MSE(me_c) are infinite: the second moment of the
            // k = 3 median diverges, so the ratios are divergent too
            row.status = MseStatus::infinite_ratio;
            rows.push_back(row);
            continue;
        }
        const double b = median_bias_factor(k);
        const std::size_t block_size = 1 << 14;
        const std::size_t num_blocks =
            (replicates + block_size - 1) / block_size;
        std::vector<std::array<double, 3>> partial(num_blocks,
                                                   {0.0, 0.0, 0.0});
        parallel_for(num_blocks, threads, [&](std::size_t blo,
                                              std::size_t bhi) {
            std::vector<double> x(k);
            for (std::size_t blk = blo; blk < bhi; ++blk) {
                const std::uint64_t lo = blk * block_size;
                const std::uint64_t hi = std::min<std::uint64_t>(
                    lo + block_size, replicates);
                auto& acc = partial[blk];
                for (std::uint64_t rep = lo; rep < hi; ++rep) {
                    for (std::size_t j = 0; j < k; ++j) {
                        x[j] = cauchy_inverse_cdf(uniform01({seed, rep, j}));
                    }
                    const double me = estimate_median(x).value;
                    const double gm = estimate_gm(x).value;
                    const double e_me = me - 1.0;
                    const double e_mec = me / b - 1.0;
                    const double e_gm = gm - 1.0;
                    acc[0] += e_me * e_me;
                    acc[1] += e_mec * e_mec;
                    acc[2] += e_gm * e_gm;
                }
            }
        });
        double mse_me = 0, mse_mec = 0, mse_gm = 0;
        for (const auto& acc : partial) {  // fixed block order
            mse_me += acc[0];
            mse_mec += acc[1];
            mse_gm += acc[2];
        }
        const double r = static_cast<double>(replicates);
        row.mse_me = mse_me / r;
        row.mse_me_c = mse_mec / r;
        row.mse_gm_c = mse_gm / r;
        row.ratio_me = row.mse_me / row.mse_gm_c;
        row.ratio_me_c = row.mse_me_c / row.mse_gm_c;
        row.status = MseStatus::ok;
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Histogram export

Histogram export_histogram(const SimSpec& spec, std::size_t bin_count,
                           unsigned threads) {
    if (bin_count < 10) {
        fail(errc::invalid_spec, "histogram needs at least 10 bins");
    }
    std::vector<double> values = simulate_estimates(spec, threads);
    const std::size_t q_index = static_cast<std::size_t>(
        0.999 * static_cast<double>(values.size() - 1));
    std::vector<double> sorted = values;
    std::nth_element(sorted.begin(), sorted.begin() + q_index, sorted.end());
    double upper = sorted[q_index];
    if (!(upper > 0.0)) upper = 1.0;

    Histogram hist;
    hist.spec = spec;
    hist.bin_count = bin_count;
    hist.bin_width = upper / static_cast<double>(bin_count);
    hist.counts.assign(bin_count, 0);
    for (double v : values) {
        std::size_t b = static_cast<std::size_t>(v / hist.bin_width);
        if (b >= bin_count) b = bin_count - 1;  // clamp the 0.1% overflow
        ++hist.counts[b];
    }
    return hist;
}

// ---------------------------------------------------------------------------
// CSV output

namespace {

void spec_comment(std::ostream& out, const char* what, const SimSpec& spec,
                  const std::string& provenance) {
    out << "# cauchysketch simulate " << what
        << " estimator=" << estimator_name(spec.estimator) << " k=" << spec.k
        << " d=" << spec.d << " R=" << spec.replicates
        << " seed=" << spec.seed;
    if (spec.estimator == EstimatorKind::frac) {
        out << " lambda=" << spec.lambda;
    }
    if (!spec.eps_grid.empty()) {
        out << " grid=";
        for (std::size_t i = 0; i < spec.eps_grid.size(); ++i) {
            if (i) out << ';';
            out << spec.eps_grid[i];
        }
    }
    if (!provenance.empty()) out << ' ' << provenance;
    out << '\n';
}

void put(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    out << buf;
}

}  // namespace

void write_moments_csv(std::ostream& out, const SimSpec& spec,
                       const SimMoments& m, const std::string& provenance) {
    spec_comment(out, "moments", spec, provenance);
    out << "stat,empirical,se,theory,theory_tag\n";
    MomentSummary theory;
    bool have_theory = false;
    switch (spec.estimator) {
        case EstimatorKind::me_c:
        case EstimatorKind::gm_c:
        case EstimatorKind::mle:
        case EstimatorKind::mle_c:
            theory = theoretical_moments(spec.estimator, spec.k, spec.d);
            have_theory = true;
            break;
        default:
            break;
    }
    const auto row = [&](const char* name, const MomentEstimate& est,
                         const MomentValue& th) {
        out << name << ',';
        put(out, est.value);
        out << ',';
        put(out, est.se);
        out << ',';
        if (!have_theory || th.tag == Exactness::unavailable) {
            out << "na,na\n";
            return;
        }
        if (th.tag == Exactness::infinite) {
            out << "inf,infinite\n";
            return;
        }
        put(out, th.value);
        out << ','
            << (th.tag == Exactness::exact ? "exact" : "asymptotic") << '\n';
    };
    row("mean", m.mean, theory.mean);
    row("variance", m.variance, theory.variance);
    row("mu3", m.mu3, theory.mu3);
    row("mu4", m.mu4, theory.mu4);
}

void write_tail_csv(std::ostream& out, const TailCurve& curve,
                    const std::string& provenance) {
    spec_comment(out, "tail", curve.spec, provenance);
    const bool gm = !curve.points.empty() && curve.points.front().gm.has_value();
    const bool mle =
        !curve.points.empty() && curve.points.front().mle.has_value();
    out << "eps,upper_emp,upper_se,upper_hits,lower_emp,lower_se,lower_hits,"
           "low_conf_upper,low_conf_lower";
    if (gm) {
        out << ",markov_upper,t1,markov_lower,t2,markov_lower_valid,"
               "exp_upper,exp_lower,exp_lower_valid";
    }
    if (mle) {
        out << ",gamma_upper,gamma_lower,gamma_chern_upper,gamma_chern_lower,"
               "ig_upper,ig_lower,ig_chern_upper,ig_chern_lower,ig_chern_sym,"
               "normal_upper,normal_lower";
    }
    out << '\n';
    for (const TailPoint& pt : curve.points) {
        put(out, pt.eps);
        out << ',';
        put(out, pt.upper_p);
        out << ',';
        put(out, pt.upper_se);
        out << ',' << pt.upper_hits << ',';
        put(out, pt.lower_p);
        out << ',';
        put(out, pt.lower_se);
        out << ',' << pt.lower_hits << ',' << (pt.low_confidence_upper ? 1 : 0)
            << ',' << (pt.low_confidence_lower ? 1 : 0);
        if (pt.gm) {
            const auto& g = *pt.gm;
            for (double v : {g.markov.upper, g.markov.t_upper, g.markov.lower,
                             g.markov.t_lower}) {
                out << ',';
                put(out, v);
            }
            out << ',' << (g.markov.markov_valid_lower ? 1 : 0) << ',';
            put(out, g.exponential.upper);
            out << ',';
            put(out, g.exponential.lower);
            out << ',' << (g.exponential.lower_valid ? 1 : 0);
        }
        if (pt.mle) {
            const auto& b = *pt.mle;
            for (double v :
                 {b.gamma_exact.upper, b.gamma_exact.lower,
                  b.gamma_chern.upper, b.gamma_chern.lower, b.ig_exact.upper,
                  b.ig_exact.lower, b.ig_chern_upper, b.ig_chern_lower,
                  b.ig_chern_symmetric, b.normal.upper, b.normal.lower}) {
                out << ',';
                put(out, v);
            }
        }
        out << '\n';
    }
}

void write_mse_csv(std::ostream& out, std::span<const MseRow> rows,
                   std::uint64_t replicates, std::uint64_t seed,
                   const std::string& provenance) {
    out << "# cauchysketch simulate mse R=" << replicates << " seed=" << seed;
    if (!provenance.empty()) out << ' ' << provenance;
    out << '\n';
    out << "k,mse_me,mse_me_c,mse_gm_c,ratio_me,ratio_me_c,status\n";
    for (const MseRow& row : rows) {
        out << row.k << ',';
        if (row.status == MseStatus::ok) {
            put(out, row.mse_me);
            out << ',';
            put(out, row.mse_me_c);
            out << ',';
            put(out, row.mse_gm_c);
            out << ',';
            put(out, row.ratio_me);
            out << ',';
            put(out, row.ratio_me_c);
            out << ",ok\n";
        } else if (row.status == MseStatus::infinite_ratio) {
            out << "inf,inf,na,inf,inf,infinite\n";
        } else {
            out << "na,na,na,na,na,invalid_k\n";
        }
    }
}

void write_histogram_csv(std::ostream& out, const Histogram& hist,
                         const std::string& provenance) {
    spec_comment(out, "hist", hist.spec, provenance);
    out << "bin_center,count\n";
    for (std::size_t b = 0; b < hist.bin_count; ++b) {
        put(out, hist.center(b));
        out << ',' << hist.counts[b] << '\n';
    }
}

}  // namespace csk::mc
