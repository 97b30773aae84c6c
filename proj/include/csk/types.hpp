#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "csk/error.hpp"

namespace csk {

enum class GeneratorTag : std::uint8_t {
    cauchy = 0,
    normal = 1,
    sparse = 2,
};

/// Distribution of the random projection-matrix entries. For the sparse
/// generator, `s` is the inverse density: entries are sqrt(s)*{+1,0,-1}
/// with probabilities 1/(2s), 1-1/s, 1/(2s).
struct GeneratorKind {
    GeneratorTag tag = GeneratorTag::cauchy;
    double s = 1.0;

    static GeneratorKind cauchy() { return {GeneratorTag::cauchy, 0.0}; }
    static GeneratorKind normal() { return {GeneratorTag::normal, 0.0}; }
    static GeneratorKind sparse(double s);

    void validate() const;
};

enum class EstimatorKind : std::uint8_t {
    me = 0,        // sample median of |x_j|
    me_c = 1,      // bias-corrected sample median
    gm_c = 2,      // bias-corrected geometric mean
    frac = 3,      // fractional moment estimator, needs lambda
    mle = 4,       // maximum likelihood scale estimate
    mle_c = 5,     // bias-corrected MLE
    or_quantile = 6,  // interquartile-range quantile estimator
    l2sq = 7,      // mean of squares, for normal/sparse sketches
};

const char* estimator_name(EstimatorKind kind);
EstimatorKind estimator_from_name(const std::string& name);

/// Row-major n x D data matrix, validated finite on construction.
class DataMatrix {
public:
    DataMatrix(std::size_t n, std::size_t d, std::vector<double> values);

    std::size_t rows() const noexcept { return n_; }
    std::size_t cols() const noexcept { return d_; }
    std::span<const double> row(std::size_t i) const;
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::size_t n_;
    std::size_t d_;
    std::vector<double> values_;
};

/// The k projected coordinate differences of one row pair. Under a cauchy
/// generator these are i.i.d. C(0, d) with d the exact l1 distance.
struct DiffSample {
    std::vector<double> x;

    std::size_t k() const noexcept { return x.size(); }
};

struct Estimate {
    double value = 0.0;
    EstimatorKind kind = EstimatorKind::me;
    std::size_t k = 0;
    bool flagged = false;  // set when an all-zero sample forced the 0 convention
};

/// Exact l1 distance between equal-length vectors; the ground truth the
/// estimators are judged against. Plain ascending-index summation so an
/// independent re-summation reproduces it bit for bit.
double l1_distance(std::span<const double> a, std::span<const double> b);

}  // namespace csk
