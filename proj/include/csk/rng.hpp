#pragma once

#include <cmath>
#include <cstdint>

#include "csk/types.hpp"

namespace csk {

/// Counter-based generation: every projection-matrix entry (and every
/// simulation draw) is a pure function of (seed, i, j). Nothing is stored;
/// the projection matrix is regenerated on demand from the sketch header.
/// GENERATOR_VERSION is written into sketch files and must be bumped if the
/// mixing function ever changes.
inline constexpr std::uint8_t GENERATOR_VERSION = 1;

struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t i = 0;
    std::uint64_t j = 0;
};

/// splitmix64 finalizer; bijective on 64 bits.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Three chained mixing rounds over (seed, i, j).
inline std::uint64_t cell_hash(const StreamKey& key) {
    std::uint64_t h = mix64(key.seed + 0x9E3779B97F4A7C15ull);
    h = mix64(h ^ (key.i + 0xD1B54A32D192ED03ull));
    h = mix64(h ^ (key.j + 0x8CB92BA72F3D8DD7ull));
    return h;
}

/// Uniform draw in the open interval (0,1): (r + 1/2) / 2^53 with r the top
/// 53 bits, so 0 and 1 are excluded by construction.
inline double uniform01(const StreamKey& key) {
    return (static_cast<double>(cell_hash(key) >> 11) + 0.5) * 0x1.0p-53;
}

/// Inverse CDF of the standard Cauchy; u in (0,1).
inline double cauchy_inverse_cdf(double u) {
    return std::tan(3.14159265358979323846 * (u - 0.5));
}

double matrix_entry(const GeneratorKind& kind, const StreamKey& key);

/// One draw from C(0, d); throws non_positive_scale for d <= 0.
double sample_cauchy_scale(double d, const StreamKey& key);

/// One standard normal via two uniforms on sub-keys (j offset by a reserved
/// stride so the keys never collide with another entry's base key).
double normal_entry(const StreamKey& key);

/// Worker count for parallel sections: hardware concurrency, optionally
/// capped by the CAUCHY_SKETCH_THREADS environment variable.
unsigned effective_threads();

}  // namespace csk
