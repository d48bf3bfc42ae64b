#include "app.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "report.hpp"

namespace maskroute::cli {

namespace {

namespace fs = std::filesystem;
using experiments::Arm;

struct Flags {
  std::optional<std::string> config_file;
  std::optional<std::string> scenario;
  std::optional<std::string> arm;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> preset;
  std::optional<std::string> out;
  std::vector<std::string> sets;
};

void add_common(CLI::App& cmd, Flags& f, bool with_arm) {
  cmd.add_option("-c,--config", f.config_file, "key = value config file");
  cmd.add_option("--scenario", f.scenario, "'gemini' or a scenario file");
  if (with_arm) cmd.add_option("--arm", f.arm, "arm to run");
  cmd.add_option("--trials", f.trials, "number of trials");
  cmd.add_option("--seed", f.seed, "base seed");
  cmd.add_option("--preset", f.preset, "stage schedule: paper or desk");
  cmd.add_option("--out", f.out, "output directory");
  cmd.add_option("--set", f.sets, "key=value override (repeatable)");
}

RunConfig resolve(const Flags& f) {
  std::vector<std::string> overrides = f.sets;
  if (f.scenario) overrides.push_back("scenario=" + *f.scenario);
  if (f.arm) overrides.push_back("arm=" + *f.arm);
  if (f.trials) overrides.push_back("trials=" + std::to_string(*f.trials));
  if (f.seed) overrides.push_back("seed=" + std::to_string(*f.seed));
  if (f.preset) overrides.push_back("preset=" + *f.preset);
  if (f.out) overrides.push_back("out=" + *f.out);
  std::optional<fs::path> file;
  if (f.config_file) file = *f.config_file;
  return parse_config(file, overrides);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
}

std::string format_actions(const std::vector<double>& actions) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2);
  for (std::size_t i = 0; i < actions.size(); ++i) s << (i ? "," : "") << actions[i];
  return s.str();
}

void write_sweep(const fs::path& path, const experiments::SweepResult& sweep) {
  auto out = open_output(path);
  out << "actions\tcost\n" << std::fixed << std::setprecision(6);
  for (const auto& p : sweep.surface) out << format_actions(p.actions) << '\t' << p.cost << '\n';
}

/// Re-runs trial 0 to capture the event trace and learning log.
void write_trace_files(const RunConfig& config, const experiments::Scenario& scenario, Arm arm,
                       const experiments::ArmResult& result, const fs::path& dir) {
  if (!config.event_trace && !config.learning_log) return;
  experiments::TrialOptions options;
  options.fixed_actions = result.ideal_actions;
  std::ofstream events, learning;
  const std::string stem(experiments::to_string(arm));
  if (config.event_trace) {
    events = open_output(dir / (stem + "_events.tsv"));
    options.event_trace = &events;
  }
  if (config.learning_log && experiments::is_learner(arm)) {
    learning = open_output(dir / (stem + "_learning.tsv"));
    options.learning_log = &learning;
  }
  experiments::run_trial(experiments::configure_arm(scenario, arm),
                         experiments::trial_seed(scenario.base_seed, 0), options);
}

experiments::RunOptions run_options(const RunConfig& config) {
  experiments::RunOptions o;
  o.trials = config.trials;
  o.threads = config.threads;
  return o;
}

int cmd_run(const RunConfig& config, std::ostream& out) {
  const auto scenario = make_scenario(config);
  const Arm arm = experiments::parse_arm(config.arm);
  const fs::path dir(config.out);
  fs::create_directories(dir);
  const auto result = experiments::run_arm(arm, scenario, run_options(config));
  {
    auto trials = open_output(dir / (std::string(experiments::to_string(arm)) + "_trials.tsv"));
    experiments::write_trials(trials, experiments::to_string(arm), result.trials);
  }
  const std::string table = render_summary({result.summary});
  write_text(dir / "summary.txt", table);
  write_trace_files(config, scenario, arm, result, dir);
  out << table;
  if (!result.ideal_actions.empty()) {
    out << "ideal actions: " << format_actions(result.ideal_actions) << '\n';
  }
  return kExitOk;
}

int cmd_table2(const RunConfig& config, std::ostream& out) {
  const auto scenario = make_scenario(config);
  const fs::path dir(config.out);
  fs::create_directories(dir);
  auto options = run_options(config);
  options.sweep = experiments::ideal_sweep(scenario, scenario.learner.sweep_step,
                                           experiments::sweep_seed(scenario.base_seed),
                                           config.threads);
  write_sweep(dir / "sweep.tsv", *options.sweep);

  std::vector<experiments::ArmSummary> summaries;
  auto trials = open_output(dir / "trials.tsv");
  bool header = true;
  for (Arm arm : experiments::kAllArms) {
    const auto result = experiments::run_arm(arm, scenario, options);
    experiments::write_trials(trials, experiments::to_string(arm), result.trials, header);
    header = false;
    summaries.push_back(result.summary);
    write_trace_files(config, scenario, arm, result, dir);
  }
  const std::string table = render_summary(summaries);
  const std::string headroom = render_headroom(experiments::headroom_report(summaries));
  write_text(dir / "summary.txt", table);
  write_text(dir / "headroom.txt", headroom);
  out << table << '\n'
      << "ideal actions: " << format_actions(options.sweep->best_actions) << "\n\n"
      << headroom;
  return kExitOk;
}

int cmd_sweep(const RunConfig& config, std::ostream& out) {
  const auto scenario = make_scenario(config);
  const fs::path dir(config.out);
  fs::create_directories(dir);
  const auto sweep = experiments::ideal_sweep(scenario, scenario.learner.sweep_step,
                                              experiments::sweep_seed(scenario.base_seed),
                                              config.threads);
  write_sweep(dir / "sweep.tsv", sweep);
  out << "best actions: " << format_actions(sweep.best_actions)
      << "  cost: " << format_grouped(sweep.best_cost) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Masked proportional routing experiments", "maskroute"};
  app.require_subcommand(1);
  Flags flags;
  auto* run = app.add_subcommand("run", "run one arm for N trials");
  auto* table2 = app.add_subcommand("table2", "run all six arms and print the summary table");
  auto* sweep = app.add_subcommand("sweep", "sweep fixed source proportions");
  auto* check = app.add_subcommand("validate", "check the configuration and print it");
  add_common(*run, flags, true);
  add_common(*table2, flags, false);
  add_common(*sweep, flags, false);
  add_common(*check, flags, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunConfig config;
  try {
    config = resolve(flags);
  } catch (const ConfigError& e) {
    err << "config error [" << e.key() << "]: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (check->parsed()) {
      make_scenario(config);
      out << serialize(config);
      return kExitOk;
    }
    if (run->parsed()) return cmd_run(config, out);
    if (table2->parsed()) return cmd_table2(config, out);
    if (sweep->parsed()) return cmd_sweep(config, out);
  } catch (const std::exception& e) {
    err << "simulation error: " << e.what() << '\n';
    return kExitSimulation;
  }
  return kExitUsage;
}

}  // namespace maskroute::cli
