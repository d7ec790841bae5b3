#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace critical_hawkes {

/// Finalizer of the splitmix64 generator. Bijective on 64-bit words, used to
/// turn structured seed material (master seed, replica index) into
/// well-mixed engine seeds.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for replica `replica_index` of a run keyed by `master_seed`.
/// Distinct replicas get decorrelated streams; the mapping is pure, so a
/// replica can be re-run in isolation.
[[nodiscard]] constexpr std::uint64_t replica_seed(std::uint64_t master_seed,
                                                   std::uint64_t replica_index) noexcept {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(replica_index + 1));
}

/// Deterministic random stream. Wraps std::mt19937_64 but performs all
/// variate transforms explicitly so that output sequences are identical
/// across standard libraries and platforms.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on the open interval (0, 1); safe as a log/inverse-cdf input.
    double uniform_open01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Exponential with the given rate. rate must be positive.
    double exponential(double rate) {
        return -std::log(uniform_open01()) / rate;
    }

    /// Standard normal via Box-Muller; generates in pairs and caches the
    /// second variate.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = uniform_open01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(theta);
        have_cached_ = true;
        return r * std::cos(theta);
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double cached_{0.0};
    bool have_cached_{false};
};

}  // namespace critical_hawkes
