#ifndef VNFOPT_RNG_HPP
#define VNFOPT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace vnfopt {

// SplitMix64. All randomness in the project flows through this generator so
// that seed-derived sub-streams reproduce bit-exactly across runs and across
// the C++/Python surfaces.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [lo, hi] inclusive
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    // Box-Muller, one value per call (no cached spare, keeps streams splittable)
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // lognormal parameterized by target mean and standard deviation
    double lognormal_mean_std(double mean, double std) {
        if (std <= 0.0) return mean;
        const double sigma2 = std::log(1.0 + (std * std) / (mean * mean));
        const double mu = std::log(mean) - 0.5 * sigma2;
        return std::exp(mu + std::sqrt(sigma2) * normal());
    }

private:
    std::uint64_t state_;
};

// Deterministic seed derivation: fold tags into a master seed so that
// sub-streams (per flow, per sweep row, ...) are independent but reproducible.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t h = master ^ 0x6a09e667f3bcc908ULL;
    for (std::uint64_t t : tags) {
        h ^= t + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        Rng mix(h);
        h = mix.next_u64();
    }
    return h;
}

} // namespace vnfopt

#endif
