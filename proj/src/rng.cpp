#include "csk/rng.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "csk/parallel.hpp"

namespace csk {

namespace {

// Reserved sub-key stride for generators that consume two uniforms; column
// indices in real use stay far below this bit.
constexpr std::uint64_t kSecondDrawBit = 1ull << 63;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;

}  // namespace

double normal_entry(const StreamKey& key) {
    const double u1 = uniform01(key);
    const double u2 = uniform01({key.seed, key.i, key.j | kSecondDrawBit});
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double matrix_entry(const GeneratorKind& kind, const StreamKey& key) {
    switch (kind.tag) {
        case GeneratorTag::cauchy:
            return cauchy_inverse_cdf(uniform01(key));
        case GeneratorTag::normal:
            return normal_entry(key);
        case GeneratorTag::sparse: {
            kind.validate();
            const double u = uniform01(key);
            const double half = 0.5 / kind.s;
            const double root = std::sqrt(kind.s);
            if (u < half) return root;
            if (u > 1.0 - half) return -root;
            return 0.0;
        }
    }
    fail(errc::invalid_generator, "unknown generator tag");
}

double sample_cauchy_scale(double d, const StreamKey& key) {
    if (!(d > 0.0)) {
        fail(errc::non_positive_scale,
             "cauchy scale must be positive, got " + std::to_string(d));
    }
    return d * cauchy_inverse_cdf(uniform01(key));
}

unsigned effective_threads() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* cap = std::getenv("CAUCHY_SKETCH_THREADS")) {
        const long v = std::strtol(cap, nullptr, 10);
        if (v >= 1 && static_cast<unsigned long>(v) < n) {
            n = static_cast<unsigned>(v);
        }
    }
    return n;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
    if (threads == 0) threads = effective_threads();
    threads = static_cast<unsigned>(
        std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1 || count == 0) {
        chunk_fn(0, count);
        return;
    }
    const std::size_t chunk = (count + threads - 1) / threads;
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&](std::size_t lo, std::size_t hi) {
        try {
            chunk_fn(lo, hi);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };
    for (unsigned w = 1; w < threads; ++w) {
        const std::size_t lo = w * chunk;
        if (lo >= count) break;
        pool.emplace_back(run, lo, std::min(count, lo + chunk));
    }
    run(0, std::min(count, chunk));
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace csk
