#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace degrenet {

inline constexpr std::uint64_t kSeedGamma = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += kSeedGamma;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic random source shared by all simulators.
//
// Stream derivation (stable contract): replica r of user seed s runs on an
// mt19937_64 engine seeded with splitmix64(s + (r + 1) * kSeedGamma). The
// engine sequence and every draw below are fully specified, so a (seed,
// stream) pair reproduces bit-identical output on any conforming platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : eng_(stream_seed(seed, stream)) {}

    static std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
        return splitmix64(seed + (stream + 1) * kSeedGamma);
    }

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on the open interval (0,1); endpoints are unreachable so logs
    // of draws stay finite.
    double uniform01() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Exponential holding time; a zero rate never fires.
    double exponential(double rate) {
        if (rate <= 0.0) return std::numeric_limits<double>::infinity();
        return -std::log(uniform01()) / rate;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Uniform index in [0, n).
    std::size_t index_below(std::size_t n) {
        auto i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace degrenet
