#include "maskroute/proportional/proportional_agent.hpp"

#include "maskroute/routing/shortest_path_agent.hpp"

namespace maskroute::proportional {

std::optional<ProportionVector> applied_vector(const routing::RoutingTable& table,
                                               NodeId destination, const ProportionVector& base,
                                               const MaskingConfig& masking,
                                               bool* used_fallback) {
  if (used_fallback) *used_fallback = false;
  if (!table.knows(destination)) return std::nullopt;
  const Seconds v_self = table.ordering_value(destination);
  const std::size_t m = table.neighbors().size();
  std::vector<Seconds> v_neighbors(m);
  for (std::size_t i = 0; i < m; ++i) v_neighbors[i] = table.reported(i, destination);
  try {
    return apply_mask(base, v_self, v_neighbors, masking);
  } catch (const NoAdmissibleLink&) {
    if (used_fallback) *used_fallback = true;
    std::size_t best = 0;
    for (std::size_t i = 1; i < m; ++i) {
      if (v_neighbors[i] < v_neighbors[best]) best = i;
    }
    return ProportionVector::point(m, best);
  }
}

ProportionalAgent::ProportionalAgent(std::size_t links, std::size_t node_count,
                                     MaskingConfig masking)
    : links_(links), masking_(masking), slots_(node_count) {
  masking_.validate();
}

void ProportionalAgent::set_base(NodeId destination, ProportionVector base) {
  if (base.size() != links_) {
    throw InvalidProportions("base vector has " + std::to_string(base.size()) +
                             " links, router has " + std::to_string(links_));
  }
  auto& s = slots_.at(destination.index());
  s.base = std::move(base);
  s.stale = true;
}

const ProportionVector* ProportionalAgent::base(NodeId destination) const {
  const auto& s = slots_.at(destination.index());
  return s.base ? &*s.base : nullptr;
}

const ProportionVector* ProportionalAgent::applied(NodeId destination) const {
  const auto& s = slots_.at(destination.index());
  return s.splitter ? &s.splitter->applied() : nullptr;
}

const SplitterState* ProportionalAgent::splitter_state(NodeId destination) const {
  const auto& s = slots_.at(destination.index());
  return s.splitter ? &s.splitter->state() : nullptr;
}

bool ProportionalAgent::refresh(const routing::RoutingTable& table, NodeId destination) {
  auto& s = slots_[destination.index()];
  bool fallback = false;
  auto applied = applied_vector(table, destination, *s.base, masking_, &fallback);
  if (!applied) return false;
  if (fallback) ++fallbacks_;
  if (!s.splitter) {
    s.splitter.emplace(std::move(*applied));
  } else if (s.splitter->update(*applied)) {
    ++resets_;
  }
  s.stale = false;
  return true;
}

std::optional<std::size_t> ProportionalAgent::route(const routing::RoutingTable& table,
                                                    NodeId destination) {
  auto& s = slots_.at(destination.index());
  if (!s.base) return routing::shortest_path_route(table, destination);
  if (s.stale && !refresh(table, destination)) return std::nullopt;
  return s.splitter->choose();
}

void ProportionalAgent::on_table_refresh(const routing::RoutingTable& table, Seconds /*now*/) {
  for (std::size_t d = 0; d < slots_.size(); ++d) {
    if (slots_[d].base) refresh(table, NodeId(static_cast<std::uint32_t>(d)));
  }
}

}  // namespace maskroute::proportional
