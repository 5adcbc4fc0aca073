#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace purifier::rng {

// splitmix64 finalizer. Used to derive independent sub-stream seeds from a
// master seed, e.g. sub-model j gets mix(master_seed, j). Parallel and serial
// runs agree because every stream is a pure function of (master, stream).
constexpr std::uint64_t mix(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

// Uniform in [0, 1), 53-bit resolution. Distribution conversions are done by
// hand because the std:: distributions are implementation-defined; the engine
// itself is pinned by the standard.
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& eng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(eng);
}

// Standard normal via Box-Muller. Consumes two engine draws per value; the
// second transform value is discarded to keep the call stateless.
inline double normal(Engine& eng) {
    double u1 = 1.0 - uniform01(eng);  // (0, 1]
    double u2 = uniform01(eng);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t below(Engine& eng, std::uint64_t n) {
    const std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t v;
    do {
        v = eng();
    } while (v >= limit);
    return v % n;
}

// Fisher-Yates.
template <typename T>
void shuffle(std::vector<T>& values, Engine& eng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::swap(values[i - 1], values[below(eng, i)]);
    }
}

}  // namespace purifier::rng
