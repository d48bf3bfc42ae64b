#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "maskroute/proportional/masking.hpp"
#include "maskroute/proportional/splitter.hpp"
#include "maskroute/sim/simulator.hpp"

namespace maskroute::proportional {

/// Masked applied vector for one destination. When masking admits no link,
/// falls back to a point mass on the neighbor with the smallest ordering
/// value (lowest slot on ties). Returns nullopt if the router has no
/// ordering value for the destination yet.
std::optional<ProportionVector> applied_vector(const routing::RoutingTable& table,
                                               NodeId destination, const ProportionVector& base,
                                               const MaskingConfig& masking,
                                               bool* used_fallback = nullptr);

/// Routes with per-destination base proportion vectors, masked against the
/// routing table's ordering values and realized by deterministic splitting.
/// Applied vectors are refreshed each time the router refreshes its table
/// and whenever a base vector changes.
class ProportionalAgent final : public sim::RoutingAgent {
 public:
  ProportionalAgent(std::size_t links, std::size_t node_count, MaskingConfig masking);

  void set_base(NodeId destination, ProportionVector base);
  const ProportionVector* base(NodeId destination) const;
  const ProportionVector* applied(NodeId destination) const;
  const SplitterState* splitter_state(NodeId destination) const;

  std::optional<std::size_t> route(const routing::RoutingTable& table,
                                   NodeId destination) override;
  void on_table_refresh(const routing::RoutingTable& table, Seconds now) override;

  std::uint64_t fallback_count() const { return fallbacks_; }
  std::uint64_t reset_count() const { return resets_; }

 private:
  struct PerDestination {
    std::optional<ProportionVector> base;
    std::optional<DeterministicSplitter> splitter;
    bool stale = true;
  };

  bool refresh(const routing::RoutingTable& table, NodeId destination);

  std::size_t links_;
  MaskingConfig masking_;
  std::vector<PerDestination> slots_;
  std::uint64_t fallbacks_ = 0;
  std::uint64_t resets_ = 0;
};

}  // namespace maskroute::proportional
