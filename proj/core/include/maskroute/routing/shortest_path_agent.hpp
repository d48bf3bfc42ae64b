#pragma once

#include "maskroute/sim/simulator.hpp"

namespace maskroute::routing {

/// Sends every packet along the routing table's next hop. Ties between
/// equal-cost paths already resolve to the lowest neighbor id in the table.
class ShortestPathAgent final : public sim::RoutingAgent {
 public:
  std::optional<std::size_t> route(const RoutingTable& table, NodeId destination) override;
};

/// Outbound slot toward the table's next hop for `destination`, if known.
std::optional<std::size_t> shortest_path_route(const RoutingTable& table, NodeId destination);

}  // namespace maskroute::routing
