#pragma once

#include <cstdint>
#include <cstddef>

namespace ruinlab::rng {

// SplitMix64 finalizer; the core mixing function of the counter-based generator.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// A splittable per-path random stream. Output i of stream (seed, path) is
// mix64(key + i * golden), so any word of any stream is addressable without
// generating its predecessors. Results are therefore independent of batch
// partitioning and worker count.
struct Stream {
    std::uint64_t key;
};

inline Stream make_stream(std::uint64_t seed, std::uint64_t path_index) {
    constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
    std::uint64_t k = mix64(seed ^ 0xA3EC4E8D6F10BB7Cull);
    return Stream{mix64(k + kGolden * (path_index + 1))};
}

inline std::uint64_t word_at(Stream s, std::uint64_t index) {
    constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
    return mix64(s.key + kGolden * index);
}

// uniform in (0,1), 53-bit resolution, never 0 or 1
inline double u64_to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

inline double uniform_at(Stream s, std::uint64_t index) {
    return u64_to_unit(word_at(s, index));
}

// Word indices >= kAuxBase are reserved for per-path auxiliary draws (tilt
// selection etc.); fill_normals consumes indices starting at 0.
constexpr std::uint64_t kAuxBase = (1ull << 62);

// Fills z[0..n) with standard normals via Box-Muller, consuming stream words
// [2*word0, 2*word0 + n). n must be even. Implemented in sampler.cpp, which is
// compiled with vectorization-friendly flags; the output is deterministic for
// a fixed build.
void fill_normals(Stream s, std::uint64_t word0, double* z, std::size_t n);

} // namespace ruinlab::rng
