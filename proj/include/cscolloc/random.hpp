#pragma once

#include <cstdint>
#include <limits>

namespace cscolloc {

/// Counter-based SplitMix64 generator.
///
/// The k-th output is a pure function of (seed, k): the finalizer of
/// Stafford's variant 13 applied to seed + k * golden_gamma. Satisfies
/// UniformRandomBitGenerator so it plugs into <random> distributions.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : seed_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept {
        ++counter_;
        return mix(seed_ + counter_ * kGamma);
    }

    void discard(std::uint64_t count) noexcept { counter_ += count; }

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

/// Independent sub-stream seed for one purpose within a trial.
constexpr std::uint64_t derive_seed(std::uint64_t trial_seed, std::uint64_t stream) noexcept {
    return SplitMix64::mix(SplitMix64::mix(trial_seed) ^ (stream * 0xd1b54a32d192ed03ULL + 1));
}

}  // namespace cscolloc
