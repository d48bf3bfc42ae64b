#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maskroute/learning/interaction.hpp"
#include "maskroute/learning/memory_learner.hpp"
#include "maskroute/proportional/masking.hpp"
#include "maskroute/sim/simulator.hpp"
#include "maskroute/sim/topology.hpp"
#include "maskroute/sim/traffic.hpp"

namespace maskroute::experiments {

enum class AgentMode : std::uint8_t {
  /// Table next hop for everything.
  kShortestPath,
  /// Fixed forward-biased base vectors, masked.
  kFixedProportional,
  /// Source whose own-destination split is set by a fixed action.
  kFixedSource,
  /// Source whose own-destination split is learned.
  kLearning,
};

std::string_view to_string(AgentMode mode);

/// Everything needed to run one trial except the seed.
struct Scenario {
  std::string name;
  sim::Topology topology;
  /// Start/stop are filled from the stage schedule when a trial is built.
  std::vector<sim::TrafficSpec> traffic;
  std::vector<AgentMode> agents;
  proportional::MaskingConfig masking;
  learning::LearnerConfig learner;
  learning::StageSchedule schedule = learning::StageSchedule::paper();
  learning::InteractionStructure interaction;
  sim::ProtocolConfig protocol;
  /// Share of a fixed router's traffic sent along its min-hop link.
  double forward_share = 0.9;
  std::uint64_t base_seed = 1;

  /// Source routers in traffic order (one learning agent each).
  std::vector<NodeId> sources() const;
  void validate() const;
};

struct GeminiOptions {
  double link_bandwidth_bps = 1000.0;
  double packet_bits = 1000.0;
  Seconds s1_low = 0.24;
  Seconds s1_high = 0.26;
  Seconds s2_low = 0.28;
  Seconds s2_high = 0.30;
};

/// The two-source, two-destination Gemini network: S1 and S2 each reach
/// their destination over a two-hop outer path (via T or U) or a three-hop
/// path through the shared A-B middle link.
Scenario build_gemini(const GeminiOptions& options = {});

/// Flat text scenario: `node NAME`, `link A B BANDWIDTH_BPS`, and
/// `traffic SRC DST LOW HIGH [BITS]` lines; `#` starts a comment.
Scenario load_scenario_file(const std::string& path);

/// The slot of `node`'s min-hop link toward `destination` (lowest neighbor
/// id on ties).
std::size_t forward_slot(const sim::Topology& topology, NodeId node, NodeId destination);

/// Base vector putting `share` on the forward slot and spreading the rest
/// evenly over the other links.
proportional::ProportionVector forward_biased_vector(const sim::Topology& topology, NodeId node,
                                                     NodeId destination, double share);

}  // namespace maskroute::experiments
