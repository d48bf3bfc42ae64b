#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "maskroute/types.hpp"

namespace maskroute::sim {

enum class PacketKind : std::uint8_t { kData, kProtocol };

/// One hop of a traced packet: queued on `channel` at `node`.
struct HopRecord {
  NodeId node;
  ChannelId channel;
  Seconds enqueued_at = 0.0;
  Seconds tx_start = 0.0;
  Seconds tx_end = 0.0;
};

struct Packet {
  PacketId id = 0;
  PacketKind kind = PacketKind::kData;
  NodeId source;
  NodeId destination;
  double size_bits = 0.0;
  Seconds created_at = 0.0;
  std::optional<Seconds> delivered_at;
  /// Generated inside the measurement window.
  bool counted = false;
  /// Protocol packets: index of the carried message.
  std::uint32_t message_slot = 0;

  // Tracing only; empty unless hop tracing is on.
  std::vector<NodeId> hop_trace;
  std::vector<HopRecord> hops;

  Seconds delay() const { return delivered_at.value_or(created_at) - created_at; }
};

}  // namespace maskroute::sim
