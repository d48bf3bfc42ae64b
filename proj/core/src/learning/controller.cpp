#include "maskroute/learning/controller.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace maskroute::learning {

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kTraining: return "training";
    case Stage::kSelection: return "selection";
    case Stage::kLearning: return "learning";
  }
  return "training";
}

LearningController::LearningController(LearnerConfig config, InteractionStructure structure,
                                       StageSchedule schedule, std::vector<std::size_t> strides,
                                       std::uint64_t seed, ActionSink& sink)
    : config_(config), structure_(std::move(structure)), schedule_(schedule), sink_(sink) {
  config_.validate();
  structure_.validate(strides.size());
  schedule_.validate(structure_.interval_length);
  for (std::size_t i = 0; i < strides.size(); ++i) {
    AgentState a;
    a.stride = strides[i];
    a.exploration = sim::make_stream(seed, sim::StreamPurpose::kExploration, i);
    a.selection = sim::make_stream(seed, sim::StreamPurpose::kBoltzmann, i);
    agents_.push_back(std::move(a));
  }
}

void LearningController::install(sim::Simulator& sim) {
  auto boundaries = interaction_schedule(structure_, schedule_, agents_.size());
  group_order_.assign(structure_.group_count(), {});
  for (const auto& b : boundaries) {
    group_order_[b.group] = b.agent_order;
  }
  sim.set_interval_listener(this, structure_.group_count());
  for (const auto& b : boundaries) sim.schedule_boundary(b.time, b.group);
  // Closing boundaries record the last interval without deciding again.
  for (std::uint32_t g = 0; g < structure_.group_count(); ++g) {
    sim.schedule_boundary(schedule_.learning_end, g);
  }
}

std::vector<double> LearningController::peer_actions(std::size_t agent) const {
  std::vector<double> out;
  for (std::size_t p : structure_.peers_of(agent)) out.push_back(agents_[p].action);
  return out;
}

void LearningController::on_interval_boundary(sim::Simulator& sim, std::uint32_t group,
                                              Seconds now) {
  const double reward = interval_reward(sim.take_interval(group).delay);
  for (std::size_t agent : group_order_.at(group)) {
    AgentState& a = agents_[agent];
    // Only whole intervals produce examples; the offset group's first
    // half-interval does not.
    bool recorded = a.decided_at &&
                    std::abs(now - *a.decided_at - structure_.interval_length) < 1e-6;
    if (now >= schedule_.learning_end - 1e-9) {
      if (recorded) a.data.push_back(TrainingExample{a.features, reward, a.interval_index++});
      continue;
    }
    decide(agent, now, reward, recorded);
  }
}

void LearningController::decide(std::size_t agent, Seconds now, double reward, bool recorded) {
  AgentState& a = agents_[agent];
  std::optional<TrainingExample> example;
  if (recorded) example = TrainingExample{a.features, reward, a.interval_index++};

  const auto peers = peer_actions(agent);
  Stage stage;
  Decision d{0.0, std::numeric_limits<double>::quiet_NaN()};
  if (now < schedule_.training_end - 1e-9) {
    stage = Stage::kTraining;
    if (example) a.data.push_back(std::move(*example));
    d.action = training_action(a.stride, a.training_index++, config_.sweep_step);
  } else if (!a.selected) {
    stage = Stage::kSelection;
    if (example) a.data.push_back(std::move(*example));
    a.selected = true;
    d = a.data.empty() ? Decision{a.action, std::numeric_limits<double>::quiet_NaN()}
                       : post_training_selection(a.data, peers, config_);
  } else {
    stage = Stage::kLearning;
    d = learning_step(a.data, std::move(example), a.action, peers, config_, a.exploration,
                      a.selection);
  }

  a.action = d.action;
  a.features.clear();
  a.features.push_back(d.action);
  a.features.insert(a.features.end(), peers.begin(), peers.end());
  a.decided_at = now;
  sink_.apply(agent, d.action);
  log_.push_back(LearningLogEntry{agent, a.interval_index, now, stage, d.action,
                                  recorded ? reward : std::numeric_limits<double>::quiet_NaN(),
                                  d.estimate});
}

void LearningController::write_log(std::ostream& out) const {
  out << "agent\tinterval\ttime\tstage\taction\treward\testimate\n";
  for (const auto& e : log_) {
    out << e.agent << '\t' << e.interval << '\t' << e.time << '\t' << to_string(e.stage) << '\t'
        << e.action << '\t';
    if (std::isnan(e.reward)) {
      out << '-';
    } else {
      out << e.reward;
    }
    out << '\t';
    if (std::isnan(e.estimate)) {
      out << '-';
    } else {
      out << e.estimate;
    }
    out << '\n';
  }
}

}  // namespace maskroute::learning
