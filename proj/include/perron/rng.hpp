#ifndef PERRON_RNG_HPP
#define PERRON_RNG_HPP

#include <cstdint>
#include <limits>

namespace perron {

/// SplitMix64 finaliser (Stafford variant 13).
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// SplitMix64: a Weyl sequence passed through mix64. The output stream is
/// fully determined by the 64-bit state, identically on every platform.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    static constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

    explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept
    {
        state_ += golden_gamma;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    constexpr std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

/// Independent stream for draw `index` under `seed`; a pure function of both,
/// so serial and parallel sampling see the same numbers.
inline constexpr SplitMix64 sample_stream(std::uint64_t seed, std::uint64_t index) noexcept
{
    return SplitMix64(mix64(seed ^ 0x6A09E667F3BCC909ULL) ^ mix64(index * SplitMix64::golden_gamma + 1));
}

} // namespace perron

#endif // PERRON_RNG_HPP
