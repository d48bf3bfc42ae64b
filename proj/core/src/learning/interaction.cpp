#include "maskroute/learning/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace maskroute::learning {

std::string_view to_string(InteractionMode mode) {
  switch (mode) {
    case InteractionMode::kStandard: return "standard";
    case InteractionMode::kLeaderFollower: return "leader_follower";
    case InteractionMode::kInterleaved: return "interleaved";
  }
  return "standard";
}

namespace {

bool whole_intervals(Seconds span, Seconds length) {
  double n = span / length;
  return n >= 1.0 - 1e-9 && std::abs(n - std::round(n)) < 1e-9;
}

}  // namespace

void StageSchedule::validate(Seconds interval_length) const {
  if (!(interval_length > 0.0)) throw std::invalid_argument("interval length must be positive");
  if (!(init_end >= 0.0 && init_end < training_end && training_end < learning_end &&
        learning_end < drain_end)) {
    throw std::invalid_argument("stage boundaries must be strictly increasing");
  }
  if (!whole_intervals(training_end - init_end, interval_length)) {
    throw std::invalid_argument("training stage is not a whole number of intervals");
  }
  if (!whole_intervals(learning_end - training_end, interval_length)) {
    throw std::invalid_argument("learning stage is not a whole number of intervals");
  }
}

StageSchedule StageSchedule::paper() { return {20.0, 15020.0, 40020.0, 45020.0}; }
StageSchedule StageSchedule::desk() { return {20.0, 1520.0, 4020.0, 4520.0}; }

std::uint32_t InteractionStructure::group_of(std::size_t agent) const {
  if (mode != InteractionMode::kInterleaved) return 0;
  return tags.at(agent);
}

std::vector<std::size_t> InteractionStructure::peers_of(std::size_t agent) const {
  std::vector<std::size_t> peers;
  switch (mode) {
    case InteractionMode::kStandard: break;
    case InteractionMode::kLeaderFollower:
      if (tags.at(agent) == 1) {
        for (std::size_t i = 0; i < tags.size(); ++i) {
          if (tags[i] == 0) peers.push_back(i);
        }
      }
      break;
    case InteractionMode::kInterleaved:
      for (std::size_t i = 0; i < tags.size(); ++i) {
        if (tags[i] != tags.at(agent)) peers.push_back(i);
      }
      break;
  }
  return peers;
}

void InteractionStructure::validate(std::size_t agents) const {
  if (!(interval_length > 0.0)) throw std::invalid_argument("interval length must be positive");
  if (mode == InteractionMode::kStandard) return;
  if (tags.size() != agents) {
    throw std::invalid_argument("interaction structure needs one role per learning agent");
  }
  auto zeros = std::count(tags.begin(), tags.end(), 0);
  auto ones = std::count(tags.begin(), tags.end(), 1);
  if (zeros + ones != static_cast<std::ptrdiff_t>(agents)) {
    throw std::invalid_argument("interaction roles must be 0 or 1");
  }
  if (zeros == 0 || ones == 0) {
    throw std::invalid_argument(mode == InteractionMode::kLeaderFollower
                                    ? "leader_follower needs at least one leader and one follower"
                                    : "interleaved groups must both be nonempty");
  }
}

std::vector<Boundary> interaction_schedule(const InteractionStructure& structure,
                                           const StageSchedule& schedule, std::size_t agents) {
  structure.validate(agents);
  schedule.validate(structure.interval_length);
  const Seconds length = structure.interval_length;
  std::vector<Boundary> out;

  auto members = [&](std::uint32_t group) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < agents; ++i) {
      if (structure.group_of(i) == group) order.push_back(i);
    }
    if (structure.mode == InteractionMode::kLeaderFollower) {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return structure.tags[a] < structure.tags[b];
      });
    }
    return order;
  };

  for (std::uint32_t g = 0; g < structure.group_count(); ++g) {
    auto order = members(g);
    const Seconds offset = structure.group_offset(g);
    if (offset > 0.0) out.push_back(Boundary{schedule.init_end, g, order});
    for (std::size_t k = 0;; ++k) {
      Seconds t = schedule.init_end + offset + static_cast<double>(k) * length;
      if (t >= schedule.learning_end - 1e-9) break;
      out.push_back(Boundary{t, g, order});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Boundary& a, const Boundary& b) { return a.time < b.time; });
  return out;
}

}  // namespace maskroute::learning
