#pragma once

#include <cstdint>
#include <random>

namespace csb {

/// splitmix64 step; used to derive independent child seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d4a2ca495df94fULL;
    return z ^ (z >> 31);
}

/// Deterministic RNG stream. Streams are derived, never shared, so parallel
/// workers stay reproducible regardless of scheduling.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::mt19937_64& engine() { return engine_; }
    std::uint64_t seed() const { return seed_; }

    /// Child stream `index` of this stream; independent of draws made so far.
    Rng child(std::uint64_t index) const {
        std::uint64_t s = seed_ ^ (0x632be59bd9b4e019ULL * (index + 1));
        return Rng(splitmix64(s));
    }

    double uniform() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }

    std::uint64_t integer(std::uint64_t upper_exclusive) {
        return std::uniform_int_distribution<std::uint64_t>(0, upper_exclusive - 1)(engine_);
    }

    /// Binomial draw with n trials and success probability p in [0,1].
    std::uint64_t binomial(std::uint64_t n, double p) {
        if (p <= 0.0) return 0;
        if (p >= 1.0) return n;
        return std::binomial_distribution<std::uint64_t>(n, p)(engine_);
    }

  private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

} // namespace csb
