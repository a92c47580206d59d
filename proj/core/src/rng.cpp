#include "kronfit/rng.hpp"

#include <cmath>

#include "kronfit/errors.hpp"

namespace kronfit {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// SplitMix64 finalizer: bijective 64-bit mix with full avalanche.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(Seed seed, std::uint64_t domain) {
  // Fold (value, stream, domain) into one key; the per-field mixes keep
  // nearby seeds and neighboring streams decorrelated.
  std::uint64_t k = mix64(seed.value ^ 0x243f6a8885a308d3ull);
  k = mix64(k ^ mix64(seed.stream + kGolden));
  k = mix64(k ^ mix64(domain));
  key_ = k;
}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterRng::next_uniform() {
  // (raw >> 11) is uniform on [0, 2^53); adding 1 maps to (0, 2^53],
  // so the result lies in (0, 1] and log() of it is always finite.
  const std::uint64_t bits = next_u64() >> 11;
  return static_cast<double>(bits + 1) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  cached_gaussian_ = radius * std::sin(angle);
  has_cached_gaussian_ = true;
  return radius * std::cos(angle);
}

std::uint64_t CounterRng::next_below(std::uint64_t bound) {
  if (bound == 0) {
    throw InvalidInput("CounterRng::next_below: bound must be positive");
  }
  // Rejection sampling over the largest multiple of bound below 2^64.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t raw = next_u64();
  while (raw >= limit) {
    raw = next_u64();
  }
  return raw % bound;
}

}  // namespace kronfit
