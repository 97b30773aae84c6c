#include "csk/types.hpp"

#include <cmath>

namespace csk {

const char* errc_name(errc code) {
    switch (code) {
        case errc::ok: return "ok";
        case errc::io: return "io_error";
        case errc::parse: return "parse_error";
        case errc::ragged_rows: return "ragged_rows";
        case errc::nonfinite: return "nonfinite";
        case errc::length_mismatch: return "length_mismatch";
        case errc::dimension_mismatch: return "dimension_mismatch";
        case errc::index_out_of_range: return "index_out_of_range";
        case errc::bad_magic: return "bad_magic";
        case errc::version_mismatch: return "version_mismatch";
        case errc::checksum_mismatch: return "checksum_mismatch";
        case errc::invalid_generator: return "invalid_generator";
        case errc::non_positive_scale: return "non_positive_scale";
        case errc::empty_sample: return "empty_sample";
        case errc::even_k: return "even_k";
        case errc::infinite_bias: return "infinite_bias";
        case errc::k_too_small: return "k_too_small";
        case errc::lambda_out_of_range: return "lambda_out_of_range";
        case errc::zero_sample_with_negative_lambda:
            return "zero_sample_with_negative_lambda";
        case errc::no_convergence: return "no_convergence";
        case errc::epsilon_out_of_range: return "epsilon_out_of_range";
        case errc::k_below_threshold: return "k_below_threshold";
        case errc::param_out_of_range: return "param_out_of_range";
        case errc::constant_too_small: return "constant_too_small";
        case errc::unsupported_kind: return "unsupported_kind";
        case errc::estimator_mismatch: return "estimator_mismatch";
        case errc::invalid_spec: return "invalid_spec";
    }
    return "unknown";
}

GeneratorKind GeneratorKind::sparse(double s) {
    GeneratorKind kind{GeneratorTag::sparse, s};
    kind.validate();
    return kind;
}

void GeneratorKind::validate() const {
    if (tag == GeneratorTag::sparse && !(s >= 1.0)) {
        fail(errc::invalid_generator,
             "sparse generator requires s >= 1, got s=" + std::to_string(s));
    }
}

const char* estimator_name(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::me: return "me";
        case EstimatorKind::me_c: return "me_c";
        case EstimatorKind::gm_c: return "gm_c";
        case EstimatorKind::frac: return "frac";
        case EstimatorKind::mle: return "mle";
        case EstimatorKind::mle_c: return "mle_c";
        case EstimatorKind::or_quantile: return "or";
        case EstimatorKind::l2sq: return "l2sq";
    }
    return "unknown";
}

EstimatorKind estimator_from_name(const std::string& name) {
    if (name == "me") return EstimatorKind::me;
    if (name == "me_c") return EstimatorKind::me_c;
    if (name == "gm_c" || name == "gm") return EstimatorKind::gm_c;
    if (name == "frac") return EstimatorKind::frac;
    if (name == "mle") return EstimatorKind::mle;
    if (name == "mle_c") return EstimatorKind::mle_c;
    if (name == "or") return EstimatorKind::or_quantile;
    if (name == "l2sq") return EstimatorKind::l2sq;
    fail(errc::unsupported_kind, "unknown estimator '" + name + "'");
}

DataMatrix::DataMatrix(std::size_t n, std::size_t d,
                       std::vector<double> values)
    : n_(n), d_(d), values_(std::move(values)) {
    if (n_ < 1 || d_ < 1) {
        fail(errc::invalid_spec, "matrix dimensions must be at least 1x1");
    }
    if (values_.size() != n_ * d_) {
        fail(errc::length_mismatch,
             "expected " + std::to_string(n_ * d_) + " values, got " +
                 std::to_string(values_.size()));
    }
    for (std::size_t idx = 0; idx < values_.size(); ++idx) {
        if (!std::isfinite(values_[idx])) {
            fail(errc::nonfinite,
                 "non-finite value at flat index " + std::to_string(idx));
        }
    }
}

std::span<const double> DataMatrix::row(std::size_t i) const {
    if (i >= n_) {
        fail(errc::index_out_of_range,
             "row " + std::to_string(i) + " out of range (n=" +
                 std::to_string(n_) + ")");
    }
    return {values_.data() + i * d_, d_};
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        fail(errc::length_mismatch,
             "l1_distance: lengths " + std::to_string(a.size()) + " vs " +
                 std::to_string(b.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::abs(a[i] - b[i]);
    }
    return sum;
}

}  // namespace csk
