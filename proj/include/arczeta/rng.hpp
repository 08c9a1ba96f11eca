#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "arczeta/rational.hpp"

namespace arczeta {

namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Stateless counter RNG: the value at (seed, stream, index) never depends on
/// how the index space is chunked, which makes parallel sampling replayable
/// bit-for-bit.
inline std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t h = splitmix64(seed ^ (0xA0761D6478BD642FULL * (stream + 1)));
    h = splitmix64(h ^ index);
    return splitmix64(h + index);
}

/// Uniform double in (0, 1), 53-bit resolution, never exactly 0 or 1.
inline double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return static_cast<double>(counter_bits(seed, stream, index) >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

/// Inverse of the standard normal CDF (Wichura's AS241, PPND16 precision).
inline double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw Error("inverse_normal_cdf: p must be in (0,1)");
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258) * r +
                  3.64784832476320460504) * r + 5.76949722146069140550) * r +
                4.63033784615654529590) * r + 1.42343711074968357734) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940) * r +
                2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580) * r +
                5.46378491116411436990) * r + 6.65790464350110377720) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -val : val;
}

inline std::uint32_t reverse_bits32(std::uint32_t x) {
    x = ((x & 0x55555555u) << 1) | ((x >> 1) & 0x55555555u);
    x = ((x & 0x33333333u) << 2) | ((x >> 2) & 0x33333333u);
    x = ((x & 0x0F0F0F0Fu) << 4) | ((x >> 4) & 0x0F0F0F0Fu);
    x = (x << 24) | ((x & 0xFF00u) << 8) | ((x >> 8) & 0xFF00u) | (x >> 24);
    return x;
}

/// Hash-based Owen scrambling of a radical-inverse value (Laine-Karras style
/// permutation acting on reversed bits).
inline std::uint32_t owen_scramble(std::uint32_t x, std::uint32_t seed) {
    x = reverse_bits32(x);
    x += seed;
    x ^= x * 0x6C50B47Cu;
    x ^= x * 0xB82F1E52u;
    x ^= x * 0xC7AFE638u;
    x ^= x * 0x8D22F6E6u;
    return reverse_bits32(x);
}

namespace detail {

struct SobolSpec {
    std::uint32_t s;
    std::uint32_t a;
    std::array<std::uint32_t, 6> m;
};

// Primitive polynomials and initial direction numbers for dimensions 2..16
// (Joe-Kuo style table); dimension 1 is the van der Corput sequence.
inline constexpr SobolSpec kSobolSpecs[15] = {
    {1, 0, {1, 0, 0, 0, 0, 0}},
    {2, 1, {1, 3, 0, 0, 0, 0}},
    {3, 1, {1, 3, 1, 0, 0, 0}},
    {3, 2, {1, 1, 1, 0, 0, 0}},
    {4, 1, {1, 1, 3, 3, 0, 0}},
    {4, 4, {1, 3, 5, 13, 0, 0}},
    {5, 2, {1, 1, 5, 5, 17, 0}},
    {5, 4, {1, 1, 5, 5, 5, 0}},
    {5, 7, {1, 1, 7, 11, 19, 0}},
    {5, 11, {1, 1, 5, 1, 1, 0}},
    {5, 13, {1, 1, 1, 3, 11, 0}},
    {5, 14, {1, 3, 5, 5, 31, 0}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
};

}  // namespace detail

/// 32-bit Sobol sequence, random access by index plus Gray-code incremental
/// advance; both give the same point for the same index.
class Sobol {
public:
    explicit Sobol(std::size_t dims) : dims_(dims) {
        if (dims == 0 || dims > 16)
            throw Error("sobol: supported dimensions are 1..16");
        v_.assign(dims, {});
        for (std::uint32_t j = 0; j < 32; ++j) v_[0][j] = 1u << (31 - j);
        for (std::size_t d = 1; d < dims; ++d) {
            const auto& spec = detail::kSobolSpecs[d - 1];
            auto& v = v_[d];
            for (std::uint32_t j = 0; j < spec.s && j < 32; ++j)
                v[j] = spec.m[j] << (31 - j);
            for (std::uint32_t j = spec.s; j < 32; ++j) {
                v[j] = v[j - spec.s] ^ (v[j - spec.s] >> spec.s);
                for (std::uint32_t i = 1; i < spec.s; ++i)
                    if ((spec.a >> (spec.s - 1 - i)) & 1) v[j] ^= v[j - i];
            }
        }
    }

    std::size_t dims() const { return dims_; }

    /// Raw (unscrambled) coordinate of point `index` in dimension d.
    std::uint32_t raw(std::uint64_t index, std::size_t d) const {
        std::uint64_t g = index ^ (index >> 1);
        std::uint32_t x = 0;
        for (std::uint32_t j = 0; g != 0 && j < 32; ++j, g >>= 1)
            if (g & 1) x ^= v_[d][j];
        return x;
    }

    /// Streaming state positioned at `start`; advance() steps the index by 1.
    struct Stream {
        const Sobol* seq;
        std::uint64_t index;
        std::vector<std::uint32_t> x;

        void advance() {
            ++index;
            std::uint32_t bit = static_cast<std::uint32_t>(__builtin_ctzll(index));
            for (std::size_t d = 0; d < x.size(); ++d) x[d] ^= seq->v_[d][bit];
        }
    };

    Stream stream(std::uint64_t start) const {
        Stream s{this, start, std::vector<std::uint32_t>(dims_)};
        for (std::size_t d = 0; d < dims_; ++d) s.x[d] = raw(start, d);
        return s;
    }

private:
    friend struct Stream;
    std::size_t dims_;
    std::vector<std::array<std::uint32_t, 32>> v_;
};

inline double unit_from_bits32(std::uint32_t x) {
    return (static_cast<double>(x) + 0.5) * 0x1.0p-32;
}

}  // namespace rng

}  // namespace arczeta
