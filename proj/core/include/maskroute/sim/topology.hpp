#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "maskroute/types.hpp"

namespace maskroute::sim {

/// One direction of a duplex link.
struct Channel {
  ChannelId id;
  NodeId from;
  NodeId to;
  double bandwidth_bps = 0.0;
  /// Fixed cost override; when set, the routing layer uses it instead of
  /// measured delay.
  std::optional<Seconds> static_cost;
};

class TopologyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Routers and duplex links. Each duplex link becomes two channels; a
/// node's outbound channels are kept sorted by neighbor id.
class Topology {
 public:
  NodeId add_node(std::string name);

  /// Adds a duplex link as two independent channels. Returns the a->b channel.
  ChannelId add_link(NodeId a, NodeId b, double bandwidth_bps);
  ChannelId add_link(NodeId a, NodeId b, double bandwidth_bps, Seconds static_cost_ab,
                     Seconds static_cost_ba);

  std::size_t node_count() const { return names_.size(); }
  std::size_t link_count() const { return channels_.size() / 2; }
  std::size_t channel_count() const { return channels_.size(); }

  const std::string& name(NodeId n) const { return names_.at(n.index()); }
  std::optional<NodeId> find(std::string_view name) const;
  NodeId at(std::string_view name) const;

  const Channel& channel(ChannelId c) const { return channels_.at(c.index()); }
  std::span<const Channel> channels() const { return channels_; }

  /// Outbound channels of `n`, sorted by neighbor id.
  std::span<const ChannelId> outbound(NodeId n) const { return outbound_.at(n.index()); }
  std::vector<NodeId> neighbors(NodeId n) const;
  std::optional<ChannelId> channel_between(NodeId from, NodeId to) const;

  /// Breadth-first hop distance from every node to `destination`.
  std::vector<std::optional<std::size_t>> hop_distances_to(NodeId destination) const;
  bool reachable(NodeId from, NodeId to) const;

 private:
  ChannelId add_channel(NodeId from, NodeId to, double bandwidth_bps,
                        std::optional<Seconds> static_cost);

  std::vector<std::string> names_;
  std::vector<Channel> channels_;
  std::vector<std::vector<ChannelId>> outbound_;
};

}  // namespace maskroute::sim
