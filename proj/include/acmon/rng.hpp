#pragma once

#include <cstdint>
#include <random>

namespace acmon {

using Rng = std::mt19937_64;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for trial `index` of stream `stream` under `master`. Each argument is
// folded through mix64 in turn, so changing the trial count never moves the
// seeds of earlier trials and distinct streams never share a sequence.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index = 0) noexcept {
  return mix64(mix64(mix64(master) ^ stream) ^ index);
}

// Stream identifiers used by the experiment runners.
namespace streams {
inline constexpr std::uint64_t kReference = 1;
inline constexpr std::uint64_t kPointSweep = 2;
inline constexpr std::uint64_t kCoverage = 3;
inline constexpr std::uint64_t kTraining = 4;
inline constexpr std::uint64_t kCalibration = 5;
inline constexpr std::uint64_t kSetup = 6;
inline constexpr std::uint64_t kTest = 7;
inline constexpr std::uint64_t kBootstrap = 8;
inline constexpr std::uint64_t kMonitor = 9;
}  // namespace streams

}  // namespace acmon
