#include "maskroute/experiments/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "maskroute/proportional/proportional_agent.hpp"
#include "maskroute/routing/shortest_path_agent.hpp"

namespace maskroute::experiments {

namespace {

struct ArmInfo {
  Arm arm;
  std::string_view key;
  std::string_view display;
  std::string_view method;
};

constexpr ArmInfo kArmInfo[] = {
    {Arm::kBellmanFord, "bellman_ford", "Bellman-Ford", "N/A"},
    {Arm::kBfSourceOnly, "bf_source_only", "BF source only", "N/A"},
    {Arm::kIdealProportions, "ideal_proportions", "Ideal Proportions", "N/A"},
    {Arm::kStdMbl, "std_mbl", "STD-MBL", "MBL"},
    {Arm::kLfMbl, "lf_mbl", "LF-MBL", "Leader/Follower"},
    {Arm::kIntMbl, "int_mbl", "INT-MBL", "Interleaving"},
};

const ArmInfo& info(Arm arm) {
  for (const auto& i : kArmInfo) {
    if (i.arm == arm) return i;
  }
  throw std::logic_error("unknown arm");
}

proportional::ProportionVector source_vector(const sim::Topology& topology, NodeId node,
                                             NodeId destination, double action) {
  return forward_biased_vector(topology, node, destination, action);
}

class SourceSink final : public learning::ActionSink {
 public:
  struct Target {
    proportional::ProportionalAgent* agent;
    NodeId node;
    NodeId destination;
  };

  SourceSink(const sim::Topology& topology, std::vector<Target> targets)
      : topology_(topology), targets_(std::move(targets)) {}

  void apply(std::size_t agent, double action) override {
    const Target& t = targets_.at(agent);
    t.agent->set_base(t.destination, source_vector(topology_, t.node, t.destination, action));
  }

 private:
  const sim::Topology& topology_;
  std::vector<Target> targets_;
};

std::size_t default_stride(std::size_t agent, std::size_t grid_size) {
  static constexpr std::size_t kPreferred[] = {1, 8, 2, 4, 5, 10, 11, 13, 16, 17, 19, 20};
  std::vector<std::size_t> usable;
  for (std::size_t s : kPreferred) {
    if (std::gcd(s, grid_size) == 1 && s < grid_size) usable.push_back(s);
  }
  for (std::size_t s = 1; s < grid_size; ++s) {
    if (std::gcd(s, grid_size) == 1 && std::find(usable.begin(), usable.end(), s) == usable.end()) {
      usable.push_back(s);
    }
  }
  if (usable.empty()) return 1;
  return usable[agent % usable.size()];
}

}  // namespace

std::string_view to_string(Arm arm) { return info(arm).key; }
std::string_view display_name(Arm arm) { return info(arm).display; }
std::string_view learning_method(Arm arm) { return info(arm).method; }

Arm parse_arm(std::string_view text) {
  for (const auto& i : kArmInfo) {
    if (i.key == text) return i.arm;
  }
  throw std::invalid_argument("unknown arm '" + std::string(text) + "'");
}

bool is_learner(Arm arm) {
  return arm == Arm::kStdMbl || arm == Arm::kLfMbl || arm == Arm::kIntMbl;
}

Scenario configure_arm(const Scenario& base, Arm arm) {
  Scenario s = base;
  std::vector<bool> is_source(s.topology.node_count(), false);
  for (NodeId n : s.sources()) is_source[n.index()] = true;
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    if (arm == Arm::kBellmanFord) {
      s.agents[i] = AgentMode::kShortestPath;
    } else if (!is_source[i]) {
      s.agents[i] = AgentMode::kFixedProportional;
    } else if (arm == Arm::kBfSourceOnly) {
      s.agents[i] = AgentMode::kShortestPath;
    } else if (arm == Arm::kIdealProportions) {
      s.agents[i] = AgentMode::kFixedSource;
    } else {
      s.agents[i] = AgentMode::kLearning;
    }
  }
  switch (arm) {
    case Arm::kLfMbl: s.interaction.mode = learning::InteractionMode::kLeaderFollower; break;
    case Arm::kIntMbl: s.interaction.mode = learning::InteractionMode::kInterleaved; break;
    default: s.interaction.mode = learning::InteractionMode::kStandard; break;
  }
  return s;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) {
  return sim::derive_seed(base_seed, sim::StreamPurpose::kTrial, trial);
}

std::uint64_t sweep_seed(std::uint64_t base_seed) {
  return sim::derive_seed(base_seed, sim::StreamPurpose::kSweep, 0);
}

TrialResult run_trial(const Scenario& scenario, std::uint64_t seed, const TrialOptions& options) {
  scenario.validate();
  const auto& schedule = scenario.schedule;
  const std::size_t n = scenario.topology.node_count();

  sim::SimulatorOptions opts;
  opts.protocol = scenario.protocol;
  opts.window = {schedule.training_end, schedule.learning_end,
                 scenario.interaction.interval_length};
  opts.seed = seed;
  opts.event_trace = options.event_trace;
  opts.table_dump = options.table_dump;
  sim::Simulator simulator(scenario.topology, opts);
  const auto& topology = simulator.topology();

  const auto sources = scenario.sources();
  std::vector<std::optional<std::size_t>> source_index(n);
  for (std::size_t i = 0; i < sources.size(); ++i) source_index[sources[i].index()] = i;

  std::vector<SourceSink::Target> learners;
  std::vector<double> fixed_actions;
  for (std::size_t i = 0; i < n; ++i) {
    NodeId node(static_cast<std::uint32_t>(i));
    AgentMode mode = scenario.agents[i];
    if (mode == AgentMode::kShortestPath) {
      simulator.set_agent(node, std::make_unique<routing::ShortestPathAgent>());
      continue;
    }
    auto agent = std::make_unique<proportional::ProportionalAgent>(topology.outbound(node).size(),
                                                                   n, scenario.masking);
    for (std::size_t d = 0; d < n; ++d) {
      if (d == i) continue;
      NodeId dest(static_cast<std::uint32_t>(d));
      agent->set_base(dest, forward_biased_vector(topology, node, dest, scenario.forward_share));
    }
    if (source_index[i] && mode != AgentMode::kFixedProportional) {
      const std::size_t si = *source_index[i];
      NodeId dest = scenario.traffic[si].destination;
      if (mode == AgentMode::kFixedSource) {
        if (si >= options.fixed_actions.size()) {
          throw std::invalid_argument("no fixed action given for source " + topology.name(node));
        }
        agent->set_base(dest, source_vector(topology, node, dest, options.fixed_actions[si]));
        fixed_actions.push_back(options.fixed_actions[si]);
      } else {
        learners.push_back({agent.get(), node, dest});
      }
    }
    simulator.set_agent(node, std::move(agent));
  }

  for (auto spec : scenario.traffic) {
    spec.start = schedule.init_end;
    spec.stop = schedule.drain_end;
    simulator.add_traffic(spec);
  }

  std::optional<SourceSink> sink;
  std::optional<learning::LearningController> controller;
  if (!learners.empty()) {
    const std::size_t grid_size = learning::action_grid(scenario.learner.sweep_step).size();
    std::vector<std::size_t> strides;
    for (std::size_t i = 0; i < learners.size(); ++i) {
      strides.push_back(default_stride(i, grid_size));
    }
    sink.emplace(topology, learners);
    controller.emplace(scenario.learner, scenario.interaction, schedule, strides, seed, *sink);
    controller->install(simulator);
  }

  const auto& ledger = simulator.run(schedule.drain_end);

  TrialResult r;
  r.seed = seed;
  r.total_cost = ledger.total_delay;
  r.packets_counted = ledger.packets_counted;
  r.packets_delivered = ledger.packets_delivered;
  r.packets_censored = ledger.packets_censored;
  r.per_interval = ledger.per_interval;
  if (controller) {
    for (std::size_t i = 0; i < controller->agent_count(); ++i) {
      r.final_actions.push_back(controller->action(i));
    }
    if (options.learning_log) controller->write_log(*options.learning_log);
  } else {
    r.final_actions = fixed_actions;
  }
  return r;
}

ArmSummary summarize(Arm arm, const std::vector<TrialResult>& trials) {
  ArmSummary s;
  s.arm = std::string(to_string(arm));
  s.display = std::string(display_name(arm));
  s.method = std::string(learning_method(arm));
  s.trial_count = trials.size();
  if (trials.empty()) return s;
  double sum = 0.0;
  for (const auto& t : trials) sum += t.total_cost;
  s.mean_cost = sum / static_cast<double>(trials.size());
  if (trials.size() > 1) {
    double ss = 0.0;
    for (const auto& t : trials) ss += (t.total_cost - s.mean_cost) * (t.total_cost - s.mean_cost);
    double sd = std::sqrt(ss / static_cast<double>(trials.size() - 1));
    s.standard_error = sd / std::sqrt(static_cast<double>(trials.size()));
  }
  return s;
}

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

SweepResult ideal_sweep(const Scenario& scenario, double grid_step, std::uint64_t seed,
                        std::size_t threads) {
  Scenario s = configure_arm(scenario, Arm::kIdealProportions);
  const Seconds length = s.interaction.interval_length;
  const auto& full = scenario.schedule;
  s.schedule.init_end = full.init_end;
  s.schedule.training_end = full.init_end + length;
  s.schedule.learning_end = s.schedule.training_end + (full.learning_end - full.training_end);
  s.schedule.drain_end = s.schedule.learning_end + (full.drain_end - full.learning_end);

  const auto grid = learning::action_grid(grid_step);
  const std::size_t dims = s.sources().size();
  std::size_t points = 1;
  for (std::size_t i = 0; i < dims; ++i) points *= grid.size();

  SweepResult out;
  out.surface.resize(points);
  for (std::size_t p = 0; p < points; ++p) {
    std::size_t rest = p;
    std::vector<double> actions(dims);
    for (std::size_t d = dims; d-- > 0;) {
      actions[d] = grid[rest % grid.size()];
      rest /= grid.size();
    }
    out.surface[p].actions = std::move(actions);
  }
  parallel_for(points, threads, [&](std::size_t p) {
    TrialOptions o;
    o.fixed_actions = out.surface[p].actions;
    out.surface[p].cost = run_trial(s, seed, o).total_cost;
  });
  auto best = std::min_element(out.surface.begin(), out.surface.end(),
                               [](const SweepPoint& a, const SweepPoint& b) { return a.cost < b.cost; });
  out.best_actions = best->actions;
  out.best_cost = best->cost;
  return out;
}

ArmResult run_arm(Arm arm, const Scenario& scenario, const RunOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("trials must be >= 1");
  ArmResult result;
  Scenario s = configure_arm(scenario, arm);
  TrialOptions trial_options;
  if (arm == Arm::kIdealProportions) {
    SweepResult sweep = options.sweep ? *options.sweep
                                      : ideal_sweep(scenario, scenario.learner.sweep_step,
                                                    sweep_seed(scenario.base_seed),
                                                    options.threads);
    result.ideal_actions = sweep.best_actions;
    trial_options.fixed_actions = sweep.best_actions;
  }
  result.trials.resize(options.trials);
  parallel_for(options.trials, options.threads, [&](std::size_t t) {
    TrialResult r = run_trial(s, trial_seed(scenario.base_seed, t), trial_options);
    r.trial = t;
    result.trials[t] = std::move(r);
  });
  result.summary = summarize(arm, result.trials);
  return result;
}

double headroom_fraction(double reference, double arm, double ideal) {
  if (reference == ideal) return arm == ideal ? 1.0 : 0.0;
  return (reference - arm) / (reference - ideal);
}

HeadroomReport headroom_report(const std::vector<ArmSummary>& summaries) {
  auto find = [&](Arm arm) -> const ArmSummary* {
    for (const auto& s : summaries) {
      if (s.arm == to_string(arm)) return &s;
    }
    return nullptr;
  };
  const ArmSummary* bf = find(Arm::kBellmanFord);
  const ArmSummary* ideal = find(Arm::kIdealProportions);
  if (!bf) throw std::invalid_argument("headroom report needs the bellman_ford arm");
  if (!ideal) throw std::invalid_argument("headroom report needs the ideal_proportions arm");
  HeadroomReport report;
  const ArmSummary* standard = find(Arm::kStdMbl);
  for (Arm arm : {Arm::kStdMbl, Arm::kLfMbl, Arm::kIntMbl}) {
    const ArmSummary* s = find(arm);
    if (!s) continue;
    report.versus_bellman_ford.push_back(
        {s->arm, headroom_fraction(bf->mean_cost, s->mean_cost, ideal->mean_cost)});
    if (standard && arm != Arm::kStdMbl) {
      report.versus_std.push_back(
          {s->arm, headroom_fraction(standard->mean_cost, s->mean_cost, ideal->mean_cost)});
    }
  }
  if (report.versus_bellman_ford.empty()) {
    throw std::invalid_argument("headroom report needs at least one learner arm");
  }
  return report;
}

void write_trials(std::ostream& out, std::string_view arm, const std::vector<TrialResult>& trials,
                  bool header) {
  if (header) out << "arm\ttrial\tseed\ttotal_cost\tcounted\tdelivered\tcensored\n";
  const auto flags = out.flags();
  const auto precision = out.precision();
  out.setf(std::ios::fixed, std::ios::floatfield);
  out.precision(6);
  for (const auto& t : trials) {
    out << arm << '\t' << t.trial << '\t' << t.seed << '\t' << t.total_cost << '\t'
        << t.packets_counted << '\t' << t.packets_delivered << '\t' << t.packets_censored << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace maskroute::experiments
