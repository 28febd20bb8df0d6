// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sparsechan {

/// Stateless 64-bit mixer (splitmix64 finalizer). Used to derive independent
/// stream seeds from a (master seed, task index) pair.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index) {
    return mix64(mix64(master_seed) ^ mix64(index ^ 0x632BE59BD9B4E019ull));
}

/// Deterministic random stream: a standard mt19937_64 engine combined with
/// fully specified uniform/normal transforms, so every draw sequence is
/// reproducible bit-for-bit across platforms and worker layouts. The library
/// never uses std::uniform_real_distribution / std::normal_distribution,
/// whose output is implementation-defined.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Independent per-task stream; tasks keyed by index are reproducible
    /// regardless of how work is split across threads.
    static RandomStream for_drop(std::uint64_t master_seed, std::uint64_t drop_index) {
        return RandomStream(derive_stream_seed(master_seed, drop_index));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a log() argument.
    double uniform_open0() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller. Always consumes exactly two engine
    /// draws; no cached second variate, so call counts stay predictable.
    double normal() {
        const double u1 = uniform_open0();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace sparsechan
