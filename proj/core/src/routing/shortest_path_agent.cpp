#include "maskroute/routing/shortest_path_agent.hpp"

namespace maskroute::routing {

std::optional<std::size_t> shortest_path_route(const RoutingTable& table, NodeId destination) {
  const auto& e = table.entry(destination);
  if (!e) return std::nullopt;
  return table.neighbor_slot(e->next_hop);
}

std::optional<std::size_t> ShortestPathAgent::route(const RoutingTable& table,
                                                    NodeId destination) {
  return shortest_path_route(table, destination);
}

}  // namespace maskroute::routing
