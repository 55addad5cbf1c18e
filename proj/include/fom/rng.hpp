#ifndef FOM_RNG_HPP
#define FOM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "fom/vec.hpp"

namespace fom {

/// Splittable counter-based generator (SplitMix64 finalizer over key+counter).
/// Every stochastic operation takes an explicit state, so runs are
/// bit-reproducible from the logged seed and states can be split for
/// independent streams.
struct RngState {
    std::uint64_t key = 0x9E3779B97F4A7C15ULL;
    std::uint64_t counter = 0;

    explicit RngState(std::uint64_t seed = 0) : key(seed ^ 0x9E3779B97F4A7C15ULL) {}

    std::uint64_t next_u64() {
        std::uint64_t z = key + (++counter) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Independent child stream; advances this state once.
    RngState split() {
        RngState child(0);
        child.key = next_u64();
        child.counter = 0;
        return child;
    }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1] (safe for logarithms).
    double uniform_pos() { return 1.0 - uniform(); }

    /// Standard normal via Box-Muller (portable across platforms, unlike
    /// std::normal_distribution).
    double normal() {
        double u1 = uniform_pos();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }
};

/// Uniform direction on the unit Euclidean sphere: n iid standard normals,
/// normalized. Degenerate all-zero draws are re-sampled.
inline Vector sample_unit_sphere(std::size_t n, RngState& rng) {
    if (n == 0) throw std::invalid_argument("sample_unit_sphere: n must be positive");
    Vector s(n);
    for (;;) {
        double nrm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = rng.normal();
            nrm2 += s[i] * s[i];
        }
        if (nrm2 > 0.0) {
            double inv = 1.0 / std::sqrt(nrm2);
            for (double& v : s) v *= inv;
            return s;
        }
    }
}

/// Uniform point in the closed unit Euclidean ball: sphere sample scaled by
/// U^{1/n}.
inline Vector sample_unit_ball(std::size_t n, RngState& rng) {
    Vector s = sample_unit_sphere(n, rng);
    double r = std::pow(rng.uniform_pos(), 1.0 / static_cast<double>(n));
    for (double& v : s) v *= r;
    return s;
}

/// Index i with probability x_i, for x on the probability simplex
/// (renormalized if the sum is off by at most 1e-9 per unit).
inline std::size_t sample_categorical(const Vector& x, RngState& rng) {
    double total = 0.0;
    for (double v : x) {
        if (v < -1e-9) throw std::invalid_argument("sample_categorical: negative weight");
        total += std::max(v, 0.0);
    }
    if (total <= 0.0) throw std::invalid_argument("sample_categorical: zero mass");
    double u = rng.uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::max(x[i], 0.0);
        if (u < acc) return i;
    }
    return x.size() - 1;  // u landed on the rounding tail
}

}  // namespace fom

#endif  // FOM_RNG_HPP
