#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "csk/rng.hpp"
#include "csk/types.hpp"

namespace csk {

struct ProjectionConfig {
    std::uint64_t seed = 0;
    std::size_t k = 1;  // target dimension
    std::size_t D = 1;  // source dimension
    GeneratorKind kind = GeneratorKind::cauchy();

    void validate() const;
    /// k >= D is permitted but pointless outside tests; callers may warn.
    bool k_exceeds_source_dim() const { return k >= D; }
};

/// The projected n x k matrix plus everything needed to regenerate the
/// projection matrix (it is never materialized).
struct Sketch {
    ProjectionConfig config;
    std::size_t n = 0;
    std::vector<double> values;  // row-major n x k

    std::span<const double> row(std::size_t i) const;
};

/// v_j = sum_i r(seed,i,j) * u_i, i ascending with compensated (Neumaier)
/// summation; the fixed order keeps results bit-identical across worker
/// partitions.
std::vector<double> project_row(std::span<const double> u,
                                const ProjectionConfig& config);

/// threads = 0 picks effective_threads(); any count produces the identical
/// sketch.
Sketch project_matrix(const DataMatrix& a, const ProjectionConfig& config,
                      unsigned threads = 0);

DiffSample diff_sample(const Sketch& sketch, std::size_t i1, std::size_t i2);

/// Binary sketch file, little-endian:
///   magic "CSK1" | format u8 | generator id u8 | generator version u8 |
///   sparse-s f64 | seed u64 | D u64 | k u64 | n u64 | n*k f64 | CRC32.
inline constexpr std::uint8_t SKETCH_FORMAT_VERSION = 1;

void sketch_write(const Sketch& sketch, const std::string& path);
Sketch sketch_read(const std::string& path);

std::uint32_t crc32(const void* data, std::size_t len,
                    std::uint32_t seed = 0);

}  // namespace csk
