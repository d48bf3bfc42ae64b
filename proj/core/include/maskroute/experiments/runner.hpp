#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maskroute/experiments/scenario.hpp"
#include "maskroute/learning/controller.hpp"
#include "maskroute/sim/metrics.hpp"

namespace maskroute::experiments {

enum class Arm {
  kBellmanFord,
  kBfSourceOnly,
  kIdealProportions,
  kStdMbl,
  kLfMbl,
  kIntMbl,
};

inline constexpr Arm kAllArms[] = {Arm::kBellmanFord, Arm::kBfSourceOnly,
                                   Arm::kIdealProportions, Arm::kStdMbl,
                                   Arm::kLfMbl,       Arm::kIntMbl};

std::string_view to_string(Arm arm);
Arm parse_arm(std::string_view text);
/// Table label, e.g. "Bellman-Ford".
std::string_view display_name(Arm arm);
/// "N/A" for the baselines.
std::string_view learning_method(Arm arm);
bool is_learner(Arm arm);

/// Agent modes and interaction structure for `arm`.
Scenario configure_arm(const Scenario& base, Arm arm);

struct TrialOptions {
  /// Source actions for kFixedSource routers, in source order.
  std::vector<double> fixed_actions;
  std::ostream* event_trace = nullptr;
  std::ostream* table_dump = nullptr;
  std::ostream* learning_log = nullptr;
};

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  Seconds total_cost = 0.0;
  std::uint64_t packets_counted = 0;
  std::uint64_t packets_delivered = 0;
  std::uint64_t packets_censored = 0;
  std::vector<sim::IntervalAggregate> per_interval;
  /// Source actions in force at the end of the learning stage.
  std::vector<double> final_actions;
};

/// Runs one trial of an already configured scenario (see configure_arm).
TrialResult run_trial(const Scenario& scenario, std::uint64_t seed,
                      const TrialOptions& options = {});

/// Seed of trial `trial` under `base_seed`.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial);

/// Seed of the ideal-proportion sweep under `base_seed`.
std::uint64_t sweep_seed(std::uint64_t base_seed);

struct ArmSummary {
  std::string arm;
  std::string display;
  std::string method;
  double mean_cost = 0.0;
  double standard_error = 0.0;
  std::size_t trial_count = 0;
};

ArmSummary summarize(Arm arm, const std::vector<TrialResult>& trials);

struct ArmResult {
  ArmSummary summary;
  std::vector<TrialResult> trials;
  /// Source actions used by the ideal arm.
  std::vector<double> ideal_actions;
};

struct SweepPoint {
  std::vector<double> actions;
  Seconds cost = 0.0;
};

struct SweepResult {
  std::vector<double> best_actions;
  Seconds best_cost = 0.0;
  std::vector<SweepPoint> surface;
};

/// Calls fn(i) for i in [0, n) on up to `threads` worker threads.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

/// Fixed-proportion runs over every grid point of the source actions. Each
/// point warms up for one interval and is then measured over a window as
/// long as the learning stage.
SweepResult ideal_sweep(const Scenario& scenario, double grid_step, std::uint64_t seed,
                        std::size_t threads = 1);

struct RunOptions {
  std::size_t trials = 40;
  std::size_t threads = 1;
  /// Reused by the ideal arm instead of sweeping again.
  std::optional<SweepResult> sweep;
};

ArmResult run_arm(Arm arm, const Scenario& scenario, const RunOptions& options);

struct HeadroomEntry {
  std::string arm;
  /// (reference - arm) / (reference - ideal)
  double fraction = 0.0;
};

struct HeadroomReport {
  std::vector<HeadroomEntry> versus_bellman_ford;
  std::vector<HeadroomEntry> versus_std;
};

double headroom_fraction(double reference, double arm, double ideal);

/// Throws std::invalid_argument if bellman_ford, ideal_proportions, or every
/// learner arm is missing.
HeadroomReport headroom_report(const std::vector<ArmSummary>& summaries);

/// Tab-separated rows: arm, trial, seed, total_cost, counted, delivered, censored.
void write_trials(std::ostream& out, std::string_view arm, const std::vector<TrialResult>& trials,
                  bool header = true);

}  // namespace maskroute::experiments
