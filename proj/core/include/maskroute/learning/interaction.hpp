#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "maskroute/types.hpp"

namespace maskroute::learning {

enum class InteractionMode { kStandard, kLeaderFollower, kInterleaved };

std::string_view to_string(InteractionMode mode);

/// Start of each stage. Training and learning span whole intervals.
struct StageSchedule {
  Seconds init_end = 20.0;
  Seconds training_end = 1520.0;
  Seconds learning_end = 4020.0;
  Seconds drain_end = 4520.0;

  void validate(Seconds interval_length) const;

  /// 20 s initialization, 30 training and 50 learning intervals of 500 s,
  /// then 5000 s of drain.
  static StageSchedule paper();
  /// 3 training and 5 learning intervals, 500 s drain.
  static StageSchedule desk();
};

/// How learning agents see each other. `tags` holds one entry per agent:
/// leader_follower uses 0 = leader, 1 = follower; interleaved uses the
/// group (0 or 1). Standard ignores tags.
struct InteractionStructure {
  InteractionMode mode = InteractionMode::kStandard;
  std::vector<std::uint8_t> tags;
  Seconds interval_length = 500.0;

  Seconds group_offset(std::uint32_t group) const {
    return group == 1 ? interval_length / 2.0 : 0.0;
  }
  std::size_t group_count() const { return mode == InteractionMode::kInterleaved ? 2 : 1; }
  std::uint32_t group_of(std::size_t agent) const;

  /// Agents whose current actions are part of `agent`'s features.
  std::vector<std::size_t> peers_of(std::size_t agent) const;

  void validate(std::size_t agents) const;
};

/// A decision point: agents in `agent_order` choose in that order.
struct Boundary {
  Seconds time = 0.0;
  std::uint32_t group = 0;
  std::vector<std::size_t> agent_order;
};

/// Decision points from the end of initialization up to (not including) the
/// end of learning, in time order. Aligned structures decide every interval
/// with leaders first; interleaved group 1 is offset by half an interval and
/// additionally takes an initial decision at the end of initialization.
std::vector<Boundary> interaction_schedule(const InteractionStructure& structure,
                                           const StageSchedule& schedule, std::size_t agents);

}  // namespace maskroute::learning
