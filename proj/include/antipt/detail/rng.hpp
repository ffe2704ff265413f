// rng.hpp — deterministic random streams for the stochastic oracles

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace antipt::detail {

// splitmix64 finalizer; good avalanche for deriving independent stream seeds
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream seed for (base seed, stream index): independent of evaluation order
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// mt19937_64 + Box-Muller. std::normal_distribution is implementation-defined,
// so the transform is spelled out to keep streams reproducible per seed.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        // 53-bit mantissa uniform in (0,1]
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    double spare_{0.0};
    bool have_spare_{false};
};

} // namespace antipt::detail
