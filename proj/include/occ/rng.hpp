#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace occ {

using Rng = std::mt19937_64;

/// Independent random streams derived from one master seed.
enum class Stream : std::uint64_t {
  Population = 1,
  Weather,
  Candidates,
  Labels,
  Committee,
  Bootstrap,
  Holdout,
  RandomSelection,
  Folds,
  Dataset,
};

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for a sub-stream; order of tags matters.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t h = mix64(seed);
  for (auto t : tags) h = mix64(h ^ mix64(t));
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t seed, Stream stream,
                                 std::initializer_list<std::uint64_t> tags = {}) {
  std::uint64_t h = derive_seed(seed, {static_cast<std::uint64_t>(stream)});
  for (auto t : tags) h = mix64(h ^ mix64(t));
  return h;
}

inline Rng make_rng(std::uint64_t seed, Stream stream, std::initializer_list<std::uint64_t> tags = {}) {
  return Rng(derive_seed(seed, stream, tags));
}

/// Uniform in [0, 1) with 53 random bits; identical across standard libraries.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double standard_normal(Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

}  // namespace occ
