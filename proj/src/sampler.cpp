#include "ruinlab/rng.hpp"

#include <cmath>

// Hot path of every Monte Carlo estimator. Batched so that the compiler can
// use the vector math library for log/sin/cos (separate plain loops; see the
// COMPILE_OPTIONS for this file in CMakeLists.txt).

namespace ruinlab::rng {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr int kBlock = 1024;
} // namespace

void fill_normals(Stream s, std::uint64_t word0, double* z, std::size_t n) {
    const std::size_t pairs = n / 2;
    alignas(64) double u1[kBlock], u2[kBlock], r[kBlock], c[kBlock], sn[kBlock];
    for (std::size_t off = 0; off < pairs; off += kBlock) {
        const std::size_t m =
            (pairs - off) < static_cast<std::size_t>(kBlock) ? (pairs - off) : kBlock;
        const std::uint64_t w0 = word0 + 2 * off;
        for (std::size_t i = 0; i < m; ++i) {
            u1[i] = u64_to_unit(mix64(s.key + kGolden * (w0 + 2 * i)));
            u2[i] = u64_to_unit(mix64(s.key + kGolden * (w0 + 2 * i + 1)));
        }
        for (std::size_t i = 0; i < m; ++i) r[i] = std::sqrt(-2.0 * std::log(u1[i]));
        for (std::size_t i = 0; i < m; ++i) c[i] = std::cos(kTwoPi * u2[i]);
        for (std::size_t i = 0; i < m; ++i) sn[i] = std::sin(kTwoPi * u2[i]);
        for (std::size_t i = 0; i < m; ++i) {
            z[2 * (off + i)] = r[i] * c[i];
            z[2 * (off + i) + 1] = r[i] * sn[i];
        }
    }
}

} // namespace ruinlab::rng
