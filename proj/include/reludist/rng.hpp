#pragma once

#include <cstdint>

namespace reludist::rng {

// Counter-based randomness. Every draw is a pure function of a 64-bit key and a 64-bit
// counter, so results never depend on the order or the thread in which draws are made.
//
//   bits(key, c)    = mix64(mix64(key) + golden * (c + 1))     (SplitMix64 output c of state mix64(key))
//   uniform(key, c) = ((bits >> 12) + 0.5) * 2^-52              (open interval (0, 1))
//   normal(key, c)  = inverse_normal_cdf(uniform(key, c))       (Wichura AS241)

inline constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Child seed for sub-stream `index` of `parent` (per-trial seeds, per-layer seeds, ...).
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
    return mix64(mix64(parent) + golden_gamma * (index + 1));
}

[[nodiscard]] constexpr std::uint64_t bits_from_state(std::uint64_t mixed_key, std::uint64_t counter) noexcept {
    return mix64(mixed_key + golden_gamma * (counter + 1));
}

[[nodiscard]] constexpr std::uint64_t bits(std::uint64_t key, std::uint64_t counter) noexcept {
    return bits_from_state(mix64(key), counter);
}

[[nodiscard]] constexpr double to_open_unit(std::uint64_t b) noexcept {
    return (static_cast<double>(b >> 12) + 0.5) * 0x1.0p-52;
}

/// Quantile of the standard normal distribution for p in (0, 1); relative accuracy about 1e-16.
[[nodiscard]] double inverse_normal_cdf(double p) noexcept;

[[nodiscard]] inline double uniform(std::uint64_t key, std::uint64_t counter) noexcept {
    return to_open_unit(bits(key, counter));
}

[[nodiscard]] inline double normal(std::uint64_t key, std::uint64_t counter) noexcept {
    return inverse_normal_cdf(uniform(key, counter));
}

/// Sequential view over one counter stream, for code that just wants "the next draw".
class stream {
  public:
    explicit stream(std::uint64_t key) noexcept : state_(mix64(key)) {}

    [[nodiscard]] double uniform() noexcept { return to_open_unit(bits_from_state(state_, counter_++)); }

    [[nodiscard]] double normal() noexcept { return inverse_normal_cdf(uniform()); }

    [[nodiscard]] std::uint64_t position() const noexcept { return counter_; }

  private:
    std::uint64_t state_;
    std::uint64_t counter_{ 0 };
};

}  // namespace reludist::rng
