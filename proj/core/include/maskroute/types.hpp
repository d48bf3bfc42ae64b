#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>

namespace maskroute {

/// Simulated time and delay, in seconds.
using Seconds = double;

inline constexpr Seconds kInfiniteCost = std::numeric_limits<Seconds>::infinity();

/// Index of a router in a topology's node table.
struct NodeId {
  std::uint32_t value = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t v) : value(v) {}
  constexpr std::size_t index() const { return value; }

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

/// Index of a unidirectional channel (one direction of a duplex link).
struct ChannelId {
  std::uint32_t value = 0;

  constexpr ChannelId() = default;
  constexpr explicit ChannelId(std::uint32_t v) : value(v) {}
  constexpr std::size_t index() const { return value; }

  friend constexpr auto operator<=>(ChannelId, ChannelId) = default;
};

using PacketId = std::uint64_t;

}  // namespace maskroute

template <>
struct std::hash<maskroute::NodeId> {
  std::size_t operator()(maskroute::NodeId n) const noexcept { return n.value; }
};
