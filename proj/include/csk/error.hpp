#pragma once

#include <stdexcept>
#include <string>

namespace csk {

/// Error categories shared by the C++ core and the C API layer.
enum class errc {
    ok = 0,
    io,
    parse,
    ragged_rows,
    nonfinite,
    length_mismatch,
    dimension_mismatch,
    index_out_of_range,
    bad_magic,
    version_mismatch,
    checksum_mismatch,
    invalid_generator,
    non_positive_scale,
    empty_sample,
    even_k,
    infinite_bias,
    k_too_small,
    lambda_out_of_range,
    zero_sample_with_negative_lambda,
    no_convergence,
    epsilon_out_of_range,
    k_below_threshold,
    param_out_of_range,
    constant_too_small,
    unsupported_kind,
    estimator_mismatch,
    invalid_spec,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace csk
