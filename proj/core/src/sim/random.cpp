#include "maskroute/sim/random.hpp"

namespace maskroute::sim {

namespace {

std::seed_seq seq_for(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(purpose), static_cast<std::uint32_t>(index),
                       static_cast<std::uint32_t>(index >> 32)};
}

}  // namespace

RandomStream make_stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index) {
  auto seq = seq_for(seed, purpose, index);
  return RandomStream(seq);
}

std::uint64_t derive_seed(std::uint64_t base, StreamPurpose purpose, std::uint64_t index) {
  auto seq = seq_for(base, purpose, index);
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

}  // namespace maskroute::sim
