#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "maskroute/learning/interaction.hpp"
#include "maskroute/learning/memory_learner.hpp"
#include "maskroute/sim/simulator.hpp"

namespace maskroute::learning {

/// Where chosen actions go (typically a source router's base vector).
class ActionSink {
 public:
  virtual ~ActionSink() = default;
  virtual void apply(std::size_t agent, double action) = 0;
};

enum class Stage : std::uint8_t { kTraining, kSelection, kLearning };

std::string_view to_string(Stage stage);

struct LearningLogEntry {
  std::size_t agent = 0;
  std::int64_t interval = 0;
  Seconds time = 0.0;
  Stage stage = Stage::kTraining;
  double action = 0.0;
  /// Reward of the interval that just ended; NaN when none was recorded.
  double reward = 0.0;
  /// Learner's estimate for the chosen action; NaN during training.
  double estimate = 0.0;
};

/// Drives a set of memory-based learners from interval boundaries: records
/// one example per completed interval, then chooses the next action by stage.
class LearningController final : public sim::IntervalListener {
 public:
  LearningController(LearnerConfig config, InteractionStructure structure,
                     StageSchedule schedule, std::vector<std::size_t> strides,
                     std::uint64_t seed, ActionSink& sink);

  /// Registers with the simulator and schedules every decision point, plus a
  /// closing boundary at the end of learning that only records examples.
  void install(sim::Simulator& sim);

  void on_interval_boundary(sim::Simulator& sim, std::uint32_t group, Seconds now) override;

  std::size_t agent_count() const { return agents_.size(); }
  double action(std::size_t agent) const { return agents_.at(agent).action; }
  const Dataset& dataset(std::size_t agent) const { return agents_.at(agent).data; }
  const std::vector<LearningLogEntry>& log() const { return log_; }

  /// Tab-separated: agent, interval, time, stage, action, reward, estimate.
  void write_log(std::ostream& out) const;

 private:
  struct AgentState {
    std::size_t stride = 1;
    Dataset data;
    double action = 0.0;
    std::vector<double> features;
    std::optional<Seconds> decided_at;
    std::size_t training_index = 0;
    std::int64_t interval_index = 0;
    bool selected = false;
    sim::RandomStream exploration;
    sim::RandomStream selection;
  };

  std::vector<double> peer_actions(std::size_t agent) const;
  void decide(std::size_t agent, Seconds now, double reward, bool recorded);

  LearnerConfig config_;
  InteractionStructure structure_;
  StageSchedule schedule_;
  ActionSink& sink_;
  std::vector<AgentState> agents_;
  std::vector<std::vector<std::size_t>> group_order_;
  std::vector<LearningLogEntry> log_;
};

}  // namespace maskroute::learning
