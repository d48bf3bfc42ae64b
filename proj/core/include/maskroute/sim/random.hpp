#pragma once

#include <cstdint>
#include <random>

namespace maskroute::sim {

/// Independent random streams, one per purpose and owner, so disabling one
/// component never shifts another component's draws.
enum class StreamPurpose : std::uint32_t {
  kTraffic = 1,
  kExploration = 2,
  kBoltzmann = 3,
  kSweep = 4,
  kTrial = 5,
};

using RandomStream = std::mt19937_64;

RandomStream make_stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index);

/// Seed for trial `trial` of a run with base seed `base`.
std::uint64_t derive_seed(std::uint64_t base, StreamPurpose purpose, std::uint64_t index);

}  // namespace maskroute::sim
