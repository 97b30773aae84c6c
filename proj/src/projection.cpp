#include "csk/projection.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

#include "csk/parallel.hpp"

namespace csk {

void ProjectionConfig::validate() const {
    if (k < 1) fail(errc::invalid_spec, "projection k must be >= 1");
    if (D < 1) fail(errc::invalid_spec, "projection D must be >= 1");
    kind.validate();
}

std::span<const double> Sketch::row(std::size_t i) const {
    if (i >= n) {
        fail(errc::index_out_of_range,
             "sketch row " + std::to_string(i) + " out of range (n=" +
                 std::to_string(n) + ")");
    }
    return {values.data() + i * config.k, config.k};
}

namespace {

// Neumaier-compensated accumulator: Cauchy entries are heavy-tailed and one
// giant term would otherwise wipe the low bits of everything simpler.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + comp; }
};

void project_row_into(std::span<const double> u,
                      const ProjectionConfig& config, double* out) {
    for (std::size_t j = 0; j < config.k; ++j) {
        CompensatedSum acc;
        for (std::size_t i = 0; i < config.D; ++i) {
            const double ui = u[i];
            if (ui == 0.0) continue;  // exact no-op for the compensated sum
            acc.add(matrix_entry(config.kind, {config.seed, i, j}) * ui);
        }
        out[j] = acc.value();
    }
}

}  // namespace

std::vector<double> project_row(std::span<const double> u,
                                const ProjectionConfig& config) {
    config.validate();
    if (u.size() != config.D) {
        fail(errc::dimension_mismatch,
             "row length " + std::to_string(u.size()) + " != D=" +
                 std::to_string(config.D));
    }
    std::vector<double> v(config.k);
    project_row_into(u, config, v.data());
    return v;
}

Sketch project_matrix(const DataMatrix& a, const ProjectionConfig& config,
                      unsigned threads) {
    config.validate();
    if (a.cols() != config.D) {
        fail(errc::dimension_mismatch,
             "matrix has D=" + std::to_string(a.cols()) +
                 ", config expects D=" + std::to_string(config.D));
    }
    Sketch sketch;
    sketch.config = config;
    sketch.n = a.rows();
    sketch.values.resize(a.rows() * config.k);
    parallel_for(a.rows(), threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            project_row_into(a.row(i), config,
                             sketch.values.data() + i * config.k);
        }
    });
    return sketch;
}

DiffSample diff_sample(const Sketch& sketch, std::size_t i1, std::size_t i2) {
    auto r1 = sketch.row(i1);
    auto r2 = sketch.row(i2);
    DiffSample diff;
    diff.x.resize(sketch.config.k);
    for (std::size_t j = 0; j < sketch.config.k; ++j) {
        diff.x[j] = r1[j] - r2[j];
    }
    return diff;
}

// ---------------------------------------------------------------------------
// Binary sketch format

namespace {

constexpr char kMagic[4] = {'C', 'S', 'K', '1'};

std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int b = 0; b < 8; ++b) {
            c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : (c >> 1);
        }
        table[i] = c;
    }
    return table;
}

struct ByteWriter {
    std::vector<unsigned char> bytes;

    void u8(std::uint8_t v) { bytes.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes.push_back((v >> (8 * i)) & 0xFF);
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) bytes.push_back((v >> (8 * i)) & 0xFF);
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        u64(bits);
    }
};

struct ByteReader {
    const unsigned char* p;
    const unsigned char* end;

    bool has(std::size_t n) const {
        return static_cast<std::size_t>(end - p) >= n;
    }
    std::uint8_t u8() { return *p++; }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(*p++) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(*p++) << (8 * i);
        return v;
    }
    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
};

constexpr std::size_t kHeaderSize = 4 + 3 + 8 + 4 * 8;  // through n

}  // namespace

std::uint32_t crc32(const void* data, std::size_t len, std::uint32_t seed) {
    static const auto table = make_crc_table();
    std::uint32_t c = seed ^ 0xFFFFFFFFu;
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        c = table[(c ^ bytes[i]) & 0xFF] ^ (c >> 8);
    }
    return c ^ 0xFFFFFFFFu;
}

void sketch_write(const Sketch& sketch, const std::string& path) {
    ByteWriter w;
    w.bytes.reserve(kHeaderSize + 8 * sketch.values.size() + 4);
    for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
    w.u8(SKETCH_FORMAT_VERSION);
    w.u8(static_cast<std::uint8_t>(sketch.config.kind.tag));
    w.u8(GENERATOR_VERSION);
    w.f64(sketch.config.kind.tag == GeneratorTag::sparse ? sketch.config.kind.s
                                                         : 0.0);
    w.u64(sketch.config.seed);
    w.u64(sketch.config.D);
    w.u64(sketch.config.k);
    w.u64(sketch.n);
    for (double v : sketch.values) w.f64(v);
    w.u32(crc32(w.bytes.data(), w.bytes.size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(errc::io, "cannot write '" + path + "'");
    out.write(reinterpret_cast<const char*>(w.bytes.data()),
              static_cast<std::streamsize>(w.bytes.size()));
    out.flush();
    if (!out) fail(errc::io, "write failed for '" + path + "'");
}

Sketch sketch_read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io, "cannot open '" + path + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());

    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        fail(errc::bad_magic, "'" + path + "' is not a sketch file");
    }
    if (bytes.size() < kHeaderSize + 4) {
        fail(errc::checksum_mismatch, "'" + path + "' is truncated");
    }
    ByteReader r{bytes.data() + 4, bytes.data() + bytes.size()};
    const std::uint8_t format = r.u8();
    const std::uint8_t generator_id = r.u8();
    const std::uint8_t generator_version = r.u8();
    if (format != SKETCH_FORMAT_VERSION) {
        fail(errc::version_mismatch,
             "unsupported sketch format version " + std::to_string(format));
    }
    if (generator_version != GENERATOR_VERSION) {
        fail(errc::version_mismatch, "sketch was written by generator version " +
                                         std::to_string(generator_version) +
                                         ", this build is " +
                                         std::to_string(GENERATOR_VERSION));
    }
    if (generator_id > 2) {
        fail(errc::invalid_generator,
             "unknown generator id " + std::to_string(generator_id));
    }
    const double sparse_s = r.f64();
    const std::uint64_t seed = r.u64();
    const std::uint64_t D = r.u64();
    const std::uint64_t k = r.u64();
    const std::uint64_t n = r.u64();

    // guard the n*k product before trusting it as a payload length
    const std::uint64_t max_cells = bytes.size() / 8;
    if (n == 0 || k == 0 || n > max_cells || k > max_cells ||
        n * k > max_cells) {
        fail(errc::checksum_mismatch, "'" + path + "' header is corrupt");
    }
    const std::size_t payload = kHeaderSize + 8 * n * k;
    if (bytes.size() != payload + 4) {
        fail(errc::checksum_mismatch, "'" + path + "' is truncated");
    }
    const std::uint32_t stored =
        static_cast<std::uint32_t>(bytes[payload]) |
        (static_cast<std::uint32_t>(bytes[payload + 1]) << 8) |
        (static_cast<std::uint32_t>(bytes[payload + 2]) << 16) |
        (static_cast<std::uint32_t>(bytes[payload + 3]) << 24);
    if (crc32(bytes.data(), payload) != stored) {
        fail(errc::checksum_mismatch, "'" + path + "' checksum mismatch");
    }

    Sketch sketch;
    sketch.config.seed = seed;
    sketch.config.D = D;
    sketch.config.k = k;
    sketch.config.kind.tag = static_cast<GeneratorTag>(generator_id);
    sketch.config.kind.s =
        sketch.config.kind.tag == GeneratorTag::sparse ? sparse_s : 0.0;
    sketch.n = n;
    sketch.config.validate();
    sketch.values.resize(n * k);
    for (std::size_t i = 0; i < sketch.values.size(); ++i) {
        sketch.values[i] = r.f64();
    }
    return sketch;
}

}  // namespace csk
