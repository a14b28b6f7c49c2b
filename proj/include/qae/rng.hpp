#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace qae {

/// splitmix64 finalizer (Steele/Lea/Flood). Used to derive independent
/// sub-stream seeds from a (master seed, stream index) pair so that
/// experiment rows can be re-derived without replaying the whole run.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed-splitting rule: stream i of master seed s is seeded with
/// splitmix64(s ^ splitmix64(i)). Order-independent, so parallel workers
/// and sequential replays agree bit for bit.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream));
}

/// Seeded pseudo-random source: std::mt19937_64 (64-bit Mersenne Twister,
/// fully specified by the C++ standard), with uniform doubles produced by
/// the 53-bit mantissa shift. No std::*_distribution adapters are used,
/// so identical seeds give identical draws on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Number of successes in `n` Bernoulli(p) trials, one uniform per trial.
    std::uint64_t binomial(std::uint64_t n, double p) {
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            hits += bernoulli(p) ? 1 : 0;
        }
        return hits;
    }

    /// Inverse-CDF draw from a cumulative table (cdf.back() must be ~1).
    std::size_t discrete(std::span<const double> cdf) {
        if (cdf.empty()) throw std::invalid_argument("discrete: empty cdf");
        const double u = uniform();
        std::size_t lo = 0, hi = cdf.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cdf[mid] <= u) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        return lo;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace qae
