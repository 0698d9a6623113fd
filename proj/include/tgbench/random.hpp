#pragma once

#include <cstdint>
#include <initializer_list>

namespace tgbench {

// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Folds a list of 64-bit words into one seed. Each word is absorbed as
/// h = mix64(h + golden + word), starting from h = 0, so the result depends
/// on every word and on their order.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0;
  for (std::uint64_t w : words) h = mix64(h + 0x9e3779b97f4a7c15ULL + w);
  return h;
}

/// Counter-based generator: the i-th output is mix64(seed + (i+1)*golden),
/// i.e. the SplitMix64 stream. Small, fast and identical on every platform,
/// which keeps corpora byte-reproducible without relying on standard-library
/// distribution implementations.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform on [0, 1) with 53 bits of resolution.
  constexpr double uniform01() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  // Uniform on the closed integer range [lo, hi], rejection-sampled so there
  // is no modulo bias.
  constexpr std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return lo + static_cast<std::int64_t>(x % span);
  }

 private:
  std::uint64_t state_;
};

}  // namespace tgbench
