#pragma once

#include <cstdint>
#include <random>

namespace topicnet {

using Rng = std::mt19937_64;

enum class Stage : std::uint64_t {
  btm = 1,
  lsirm = 2,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Sub-seed for (stage, index) under a global seed. Only depends on its
/// arguments, so worker scheduling never changes which stream a job gets.
constexpr std::uint64_t derive_seed(std::uint64_t global, Stage stage, std::uint64_t index = 0) noexcept {
  return mix64(mix64(mix64(global) ^ static_cast<std::uint64_t>(stage)) ^ index);
}

}  // namespace topicnet
