#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "maskroute/types.hpp"

namespace maskroute::routing {

struct RoutingTableEntry {
  NodeId destination;
  Seconds cost = kInfiniteCost;
  NodeId next_hop;
  Seconds updated_at = 0.0;
};

struct DistanceVectorMessage {
  struct Entry {
    NodeId destination;
    Seconds cost;
  };
  NodeId sender;
  std::vector<Entry> vector;
  double size_bits = 0.0;
};

class UnknownDestination : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Per-router distance-vector state: the latest vector reported by each
/// neighbor, the cost of the link to that neighbor, and the derived table.
///
/// Every update recomputes cost(d) = min over neighbors n of
/// link_cost(n) + reported(n, d) from the latest reports, so a worse report
/// from the current next hop re-raises the cost to the best alternative.
/// Equal costs resolve to the lowest neighbor id. No split horizon.
class RoutingTable {
 public:
  RoutingTable(NodeId self, std::span<const NodeId> neighbors, std::size_t node_count);

  NodeId self() const { return self_; }
  std::span<const NodeId> neighbors() const { return neighbors_; }

  /// Bellman-Ford relaxation against a neighbor's vector.
  void apply(const DistanceVectorMessage& msg, Seconds link_cost, Seconds now);

  /// Replaces the cost of the link to neighbor slot `neighbor_index` and
  /// recomputes every destination.
  void set_link_cost(std::size_t neighbor_index, Seconds cost, Seconds now);
  void set_link_costs(std::span<const Seconds> costs, Seconds now);

  bool knows(NodeId destination) const;
  const std::optional<RoutingTableEntry>& entry(NodeId destination) const;

  /// The ordering value v(self) for `destination`.
  Seconds ordering_value(NodeId destination) const;

  /// Latest cost for `destination` reported by neighbor slot `neighbor_index`,
  /// or +inf when that neighbor has not reported it. A neighbor that is the
  /// destination reports 0 implicitly.
  Seconds reported(std::size_t neighbor_index, NodeId destination) const;

  std::optional<std::size_t> neighbor_slot(NodeId n) const;
  Seconds link_cost(std::size_t neighbor_index) const { return link_costs_.at(neighbor_index); }

  DistanceVectorMessage make_message(double bits_per_entry) const;

  /// One line per known destination: router, destination, cost, next hop.
  void dump(std::ostream& out, Seconds now) const;

 private:
  void recompute(Seconds now);

  NodeId self_;
  std::vector<NodeId> neighbors_;
  std::vector<Seconds> link_costs_;
  // reports_[slot][destination]
  std::vector<std::vector<Seconds>> reports_;
  std::vector<std::optional<RoutingTableEntry>> entries_;
};

/// Value-returning form of RoutingTable::apply.
RoutingTable bf_update(RoutingTable table, const DistanceVectorMessage& msg, Seconds link_cost,
                       Seconds now = 0.0);

/// Exponentially weighted per-packet delay on one channel, floored at the
/// transmission time of a reference packet.
class LinkCostEstimator {
 public:
  LinkCostEstimator(double alpha, Seconds floor);

  void observe(Seconds packet_delay);
  Seconds estimate() const;
  Seconds floor() const { return floor_; }

 private:
  double alpha_;
  Seconds floor_;
  Seconds average_;
};

}  // namespace maskroute::routing
