#include "maskroute/routing/distance_vector.hpp"

#include <algorithm>
#include <ostream>
#include <string>

namespace maskroute::routing {

RoutingTable::RoutingTable(NodeId self, std::span<const NodeId> neighbors, std::size_t node_count)
    : self_(self),
      neighbors_(neighbors.begin(), neighbors.end()),
      link_costs_(neighbors.size(), kInfiniteCost),
      reports_(neighbors.size(), std::vector<Seconds>(node_count, kInfiniteCost)),
      entries_(node_count) {
  if (self.index() >= node_count) throw std::out_of_range("router id out of range");
  std::sort(neighbors_.begin(), neighbors_.end());
  for (std::size_t slot = 0; slot < neighbors_.size(); ++slot) {
    reports_[slot][neighbors_[slot].index()] = 0.0;
  }
  entries_[self.index()] = RoutingTableEntry{self, 0.0, self, 0.0};
}

std::optional<std::size_t> RoutingTable::neighbor_slot(NodeId n) const {
  auto it = std::lower_bound(neighbors_.begin(), neighbors_.end(), n);
  if (it == neighbors_.end() || *it != n) return std::nullopt;
  return static_cast<std::size_t>(it - neighbors_.begin());
}

void RoutingTable::apply(const DistanceVectorMessage& msg, Seconds link_cost, Seconds now) {
  auto slot = neighbor_slot(msg.sender);
  if (!slot) {
    throw std::invalid_argument("distance vector from non-neighbor " +
                                std::to_string(msg.sender.value));
  }
  auto& row = reports_[*slot];
  std::fill(row.begin(), row.end(), kInfiniteCost);
  row[msg.sender.index()] = 0.0;
  for (const auto& e : msg.vector) {
    if (e.destination.index() < row.size()) row[e.destination.index()] = e.cost;
  }
  link_costs_[*slot] = link_cost;
  recompute(now);
}

void RoutingTable::set_link_cost(std::size_t neighbor_index, Seconds cost, Seconds now) {
  link_costs_.at(neighbor_index) = cost;
  recompute(now);
}

void RoutingTable::set_link_costs(std::span<const Seconds> costs, Seconds now) {
  if (costs.size() != link_costs_.size()) throw std::invalid_argument("link cost count mismatch");
  std::copy(costs.begin(), costs.end(), link_costs_.begin());
  recompute(now);
}

void RoutingTable::recompute(Seconds now) {
  for (std::size_t d = 0; d < entries_.size(); ++d) {
    if (d == self_.index()) continue;
    Seconds best = kInfiniteCost;
    std::size_t best_slot = 0;
    for (std::size_t slot = 0; slot < neighbors_.size(); ++slot) {
      // Only neighbors whose link cost is known (have spoken) count.
      Seconds c = link_costs_[slot] + reports_[slot][d];
      if (c < best) {
        best = c;
        best_slot = slot;
      }
    }
    auto& e = entries_[d];
    if (best == kInfiniteCost) {
      e.reset();
      continue;
    }
    NodeId hop = neighbors_[best_slot];
    if (!e || e->cost != best || e->next_hop != hop) {
      e = RoutingTableEntry{NodeId(static_cast<std::uint32_t>(d)), best, hop, now};
    }
  }
}

bool RoutingTable::knows(NodeId destination) const {
  return destination.index() < entries_.size() && entries_[destination.index()].has_value();
}

const std::optional<RoutingTableEntry>& RoutingTable::entry(NodeId destination) const {
  return entries_.at(destination.index());
}

Seconds RoutingTable::ordering_value(NodeId destination) const {
  if (!knows(destination)) {
    throw UnknownDestination("router " + std::to_string(self_.value) +
                             " has no route to destination " +
                             std::to_string(destination.value));
  }
  return entries_[destination.index()]->cost;
}

Seconds RoutingTable::reported(std::size_t neighbor_index, NodeId destination) const {
  return reports_.at(neighbor_index).at(destination.index());
}

DistanceVectorMessage RoutingTable::make_message(double bits_per_entry) const {
  DistanceVectorMessage msg;
  msg.sender = self_;
  for (const auto& e : entries_) {
    if (e) msg.vector.push_back({e->destination, e->cost});
  }
  msg.size_bits = bits_per_entry * static_cast<double>(msg.vector.size());
  return msg;
}

void RoutingTable::dump(std::ostream& out, Seconds now) const {
  for (const auto& e : entries_) {
    if (!e) continue;
    out << now << '\t' << self_.value << '\t' << e->destination.value << '\t' << e->cost << '\t'
        << e->next_hop.value << '\n';
  }
}

RoutingTable bf_update(RoutingTable table, const DistanceVectorMessage& msg, Seconds link_cost,
                       Seconds now) {
  table.apply(msg, link_cost, now);
  return table;
}

LinkCostEstimator::LinkCostEstimator(double alpha, Seconds floor)
    : alpha_(alpha), floor_(floor), average_(floor) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
  if (!(floor > 0.0)) throw std::invalid_argument("cost floor must be positive");
}

void LinkCostEstimator::observe(Seconds packet_delay) {
  average_ += alpha_ * (packet_delay - average_);
}

Seconds LinkCostEstimator::estimate() const { return std::max(average_, floor_); }

}  // namespace maskroute::routing
