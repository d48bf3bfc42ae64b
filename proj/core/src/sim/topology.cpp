#include "maskroute/sim/topology.hpp"

#include <algorithm>
#include <deque>

namespace maskroute::sim {

NodeId Topology::add_node(std::string name) {
  if (find(name)) throw TopologyError("duplicate node name '" + name + "'");
  names_.push_back(std::move(name));
  outbound_.emplace_back();
  return NodeId(static_cast<std::uint32_t>(names_.size() - 1));
}

ChannelId Topology::add_channel(NodeId from, NodeId to, double bandwidth_bps,
                                std::optional<Seconds> static_cost) {
  ChannelId id(static_cast<std::uint32_t>(channels_.size()));
  channels_.push_back(Channel{id, from, to, bandwidth_bps, static_cost});
  auto& out = outbound_[from.index()];
  out.push_back(id);
  std::sort(out.begin(), out.end(), [this](ChannelId x, ChannelId y) {
    return channels_[x.index()].to < channels_[y.index()].to;
  });
  return id;
}

ChannelId Topology::add_link(NodeId a, NodeId b, double bandwidth_bps) {
  if (a.index() >= node_count() || b.index() >= node_count()) {
    throw TopologyError("link endpoint out of range");
  }
  if (a == b) throw TopologyError("self-loop on node '" + name(a) + "'");
  if (!(bandwidth_bps > 0.0)) throw TopologyError("link bandwidth must be positive");
  if (channel_between(a, b)) {
    throw TopologyError("duplicate link " + name(a) + "-" + name(b));
  }
  ChannelId ab = add_channel(a, b, bandwidth_bps, std::nullopt);
  add_channel(b, a, bandwidth_bps, std::nullopt);
  return ab;
}

ChannelId Topology::add_link(NodeId a, NodeId b, double bandwidth_bps, Seconds static_cost_ab,
                             Seconds static_cost_ba) {
  if (!(static_cost_ab > 0.0) || !(static_cost_ba > 0.0)) {
    throw TopologyError("static link cost must be positive");
  }
  ChannelId ab = add_link(a, b, bandwidth_bps);
  channels_[ab.index()].static_cost = static_cost_ab;
  channels_[ab.index() + 1].static_cost = static_cost_ba;
  return ab;
}

std::optional<NodeId> Topology::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return NodeId(static_cast<std::uint32_t>(it - names_.begin()));
}

NodeId Topology::at(std::string_view name) const {
  if (auto n = find(name)) return *n;
  throw TopologyError("unknown node '" + std::string(name) + "'");
}

std::vector<NodeId> Topology::neighbors(NodeId n) const {
  std::vector<NodeId> out;
  for (ChannelId c : outbound(n)) out.push_back(channel(c).to);
  return out;
}

std::optional<ChannelId> Topology::channel_between(NodeId from, NodeId to) const {
  if (from.index() >= outbound_.size()) return std::nullopt;
  for (ChannelId c : outbound_[from.index()]) {
    if (channels_[c.index()].to == to) return c;
  }
  return std::nullopt;
}

std::vector<std::optional<std::size_t>> Topology::hop_distances_to(NodeId destination) const {
  std::vector<std::optional<std::size_t>> dist(node_count());
  std::deque<NodeId> frontier{destination};
  dist[destination.index()] = 0;
  while (!frontier.empty()) {
    NodeId n = frontier.front();
    frontier.pop_front();
    // Links are duplex, so inbound neighbors equal outbound neighbors.
    for (ChannelId c : outbound(n)) {
      NodeId m = channel(c).to;
      if (!dist[m.index()]) {
        dist[m.index()] = *dist[n.index()] + 1;
        frontier.push_back(m);
      }
    }
  }
  return dist;
}

bool Topology::reachable(NodeId from, NodeId to) const {
  return hop_distances_to(to).at(from.index()).has_value();
}

}  // namespace maskroute::sim
