#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "maskroute/experiments/runner.hpp"
#include "maskroute/experiments/scenario.hpp"

using namespace maskroute;
using namespace maskroute::experiments;

namespace {

// Gemini on a compressed schedule: 10 s intervals, 2 training and 2
// learning intervals.
Scenario tiny_gemini(double bandwidth = 3500.0) {
  Scenario s = build_gemini({bandwidth});
  s.schedule = {20.0, 40.0, 60.0, 70.0};
  s.interaction.interval_length = 10.0;
  return s;
}

// Shortest hop count from `from` to `to` without passing through `avoid`.
std::size_t hops_avoiding(const sim::Topology& t, NodeId from, NodeId to, NodeId avoid) {
  std::vector<std::size_t> dist(t.node_count(), SIZE_MAX);
  std::vector<NodeId> frontier{from};
  dist[from.index()] = 0;
  while (!frontier.empty()) {
    std::vector<NodeId> next;
    for (NodeId n : frontier) {
      for (NodeId m : t.neighbors(n)) {
        if (m == avoid || dist[m.index()] != SIZE_MAX) continue;
        dist[m.index()] = dist[n.index()] + 1;
        next.push_back(m);
      }
    }
    frontier = std::move(next);
  }
  return dist[to.index()];
}

}  // namespace

TEST_CASE("Gemini topology") {
  const auto g = build_gemini();
  const auto& t = g.topology;
  CHECK(t.node_count() == 8);
  CHECK(t.link_count() == 9);
  const NodeId s1 = t.at("S1"), d1 = t.at("D1"), a = t.at("A"), top = t.at("T");
  CHECK(t.neighbors(s1) == std::vector<NodeId>{a, top});
  CHECK(1 + hops_avoiding(t, top, d1, s1) == 2);
  CHECK(1 + hops_avoiding(t, a, d1, s1) == 3);
  CHECK(t.channel(t.outbound(s1)[forward_slot(t, s1, d1)]).to == top);
  for (const auto& c : t.channels()) CHECK(c.bandwidth_bps == 1000.0);
  CHECK(g.sources() == std::vector<NodeId>{s1, t.at("S2")});
  CHECK(g.agents[s1.index()] == AgentMode::kLearning);
  CHECK(g.agents[a.index()] == AgentMode::kFixedProportional);
  CHECK_NOTHROW(g.validate());
}

TEST_CASE("fixed routers favour the min-hop link") {
  const auto g = build_gemini();
  const auto& t = g.topology;
  const NodeId a = t.at("A"), d1 = t.at("D1");
  const auto v = forward_biased_vector(t, a, d1, 0.9);
  const std::size_t fwd = forward_slot(t, a, d1);
  CHECK(t.channel(t.outbound(a)[fwd]).to == t.at("B"));
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(v[i] == doctest::Approx(i == fwd ? 0.9 : 0.1 / 2.0));
  }
}

TEST_CASE("arm configuration") {
  const auto g = build_gemini();
  const NodeId s1 = g.topology.at("S1"), b = g.topology.at("B");
  auto bf = configure_arm(g, Arm::kBellmanFord);
  for (auto m : bf.agents) CHECK(m == AgentMode::kShortestPath);
  CHECK(bf.protocol.enabled);
  auto src = configure_arm(g, Arm::kBfSourceOnly);
  CHECK(src.agents[s1.index()] == AgentMode::kShortestPath);
  CHECK(src.agents[b.index()] == AgentMode::kFixedProportional);
  CHECK(src.masking.mode == proportional::MaskingMode::kSoftExponential);
  CHECK(configure_arm(g, Arm::kIdealProportions).agents[s1.index()] == AgentMode::kFixedSource);
  CHECK(configure_arm(g, Arm::kLfMbl).interaction.mode ==
        learning::InteractionMode::kLeaderFollower);
  CHECK(configure_arm(g, Arm::kIntMbl).interaction.mode ==
        learning::InteractionMode::kInterleaved);
  for (Arm arm : kAllArms) CHECK(parse_arm(to_string(arm)) == arm);
  CHECK(learning_method(Arm::kBellmanFord) == "N/A");
  CHECK_THROWS(parse_arm("q_routing"));
}

TEST_CASE("scenario validation") {
  auto s = build_gemini();
  s.traffic[0].destination = s.traffic[0].source;
  CHECK_THROWS(s.validate());
  sim::Topology split;
  split.add_node("x");
  split.add_node("y");
  Scenario bad;
  bad.topology = split;
  bad.agents.assign(2, AgentMode::kShortestPath);
  bad.traffic.push_back({NodeId(0), NodeId(1)});
  CHECK_THROWS(bad.validate());
}

TEST_CASE("trials are reproducible and seeds are per trial") {
  auto s = configure_arm(tiny_gemini(), Arm::kStdMbl);
  auto a = run_trial(s, trial_seed(1, 0));
  auto b = run_trial(s, trial_seed(1, 0));
  CHECK(a.total_cost == b.total_cost);
  CHECK(a.final_actions == b.final_actions);
  CHECK(a.packets_counted > 0);
  CHECK(a.total_cost >= 0.0);
  CHECK(trial_seed(1, 0) != trial_seed(1, 1));
  CHECK(trial_seed(1, 0) != trial_seed(2, 0));
  CHECK(trial_seed(1, 3) != sweep_seed(1));
  auto c = run_trial(s, trial_seed(1, 1));
  CHECK(c.total_cost != a.total_cost);
}

TEST_CASE("run_arm reports one summary over all trials") {
  RunOptions o;
  o.trials = 40;
  auto r = run_arm(Arm::kBellmanFord, tiny_gemini(), o);
  CHECK(r.summary.trial_count == 40);
  REQUIRE(r.trials.size() == 40);
  double mean = 0.0;
  for (const auto& t : r.trials) mean += t.total_cost;
  mean /= 40.0;
  double ss = 0.0;
  for (const auto& t : r.trials) ss += (t.total_cost - mean) * (t.total_cost - mean);
  CHECK(r.summary.mean_cost == doctest::Approx(mean));
  CHECK(r.summary.standard_error == doctest::Approx(std::sqrt(ss / 39.0) / std::sqrt(40.0)));
  CHECK(r.summary.display == "Bellman-Ford");
  for (std::size_t i = 0; i < 40; ++i) CHECK(r.trials[i].seed == trial_seed(1, i));
}

TEST_CASE("parallel trials match serial trials") {
  RunOptions serial, parallel;
  serial.trials = parallel.trials = 6;
  parallel.threads = 3;
  auto a = run_arm(Arm::kIntMbl, tiny_gemini(), serial);
  auto b = run_arm(Arm::kIntMbl, tiny_gemini(), parallel);
  for (std::size_t i = 0; i < 6; ++i) CHECK(a.trials[i].total_cost == b.trials[i].total_cost);
}

TEST_CASE("ideal sweep covers the joint grid") {
  auto s = tiny_gemini();
  CHECK(learning::action_grid(0.05).size() * learning::action_grid(0.05).size() == 441);
  auto sweep = ideal_sweep(s, 0.25, sweep_seed(1));
  REQUIRE(sweep.surface.size() == 25);
  for (const auto& p : sweep.surface) {
    CHECK(p.actions.size() == 2);
    CHECK(sweep.best_cost <= p.cost);
  }
  RunOptions o;
  o.trials = 2;
  o.sweep = sweep;
  auto ideal = run_arm(Arm::kIdealProportions, s, o);
  CHECK(ideal.ideal_actions == sweep.best_actions);
  for (const auto& t : ideal.trials) CHECK(t.final_actions == sweep.best_actions);
}

TEST_CASE("all traffic on the shortest path matches Bellman-Ford under light load") {
  auto s = tiny_gemini(1e5);
  auto bf = configure_arm(s, Arm::kBellmanFord);
  auto corner = bf;
  for (NodeId n : s.sources()) corner.agents[n.index()] = AgentMode::kFixedSource;
  TrialOptions o;
  o.fixed_actions = {1.0, 1.0};
  for (std::size_t t = 0; t < 3; ++t) {
    const auto seed = trial_seed(1, t);
    const double a = run_trial(bf, seed).total_cost;
    const double b = run_trial(corner, seed, o).total_cost;
    CHECK(b == doctest::Approx(a).epsilon(0.01));
  }
}

TEST_CASE("headroom arithmetic") {
  CHECK(headroom_fraction(100.0, 20.0, 20.0) == 1.0);
  CHECK(headroom_fraction(100.0, 100.0, 20.0) == 0.0);
  const double paper = headroom_fraction(1537914.0, 519557.0, 444637.0);
  CHECK(paper == doctest::Approx(0.931).epsilon(5e-4));

  auto summary = [](Arm arm, double cost) {
    ArmSummary s;
    s.arm = std::string(to_string(arm));
    s.mean_cost = cost;
    return s;
  };
  std::vector<ArmSummary> all{summary(Arm::kBellmanFord, 100.0),
                              summary(Arm::kIdealProportions, 20.0),
                              summary(Arm::kStdMbl, 40.0), summary(Arm::kLfMbl, 30.0)};
  auto report = headroom_report(all);
  REQUIRE(report.versus_bellman_ford.size() == 2);
  CHECK(report.versus_bellman_ford[0].fraction == doctest::Approx(0.75));
  REQUIRE(report.versus_std.size() == 1);
  CHECK(report.versus_std[0].fraction == doctest::Approx(0.5));
  CHECK_THROWS(headroom_report({summary(Arm::kBellmanFord, 1.0)}));
}

TEST_CASE("trial output is fixed-format text") {
  TrialResult t;
  t.trial = 2;
  t.seed = 9;
  t.total_cost = 1.5;
  t.packets_counted = 3;
  t.packets_delivered = 2;
  t.packets_censored = 1;
  std::ostringstream out;
  write_trials(out, "std_mbl", {t});
  CHECK(out.str() ==
        "arm\ttrial\tseed\ttotal_cost\tcounted\tdelivered\tcensored\n"
        "std_mbl\t2\t9\t1.500000\t3\t2\t1\n");
}

TEST_CASE("scenario files") {
  const auto path = std::filesystem::temp_directory_path() / "maskroute_scenario_test.txt";
  {
    std::ofstream f(path);
    f << "# two paths\nnode s\nnode x\nnode y\nnode d\n"
         "link s x 2000\nlink s y 2000\nlink x d 2000\nlink y d 1000  # slow\n"
         "traffic s d 0.5 0.7 1000\n";
  }
  auto s = load_scenario_file(path.string());
  CHECK(s.topology.node_count() == 4);
  CHECK(s.topology.link_count() == 4);
  REQUIRE(s.traffic.size() == 1);
  CHECK(s.agents[0] == AgentMode::kLearning);
  s.schedule = {20.0, 40.0, 60.0, 70.0};
  s.interaction.interval_length = 10.0;
  CHECK(run_trial(configure_arm(s, Arm::kStdMbl), 1).packets_counted > 0);
  {
    std::ofstream f(path);
    f << "node s\nlink s q 10\n";
  }
  CHECK_THROWS_AS(load_scenario_file(path.string()), std::invalid_argument);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_scenario_file(path.string()), std::invalid_argument);
}
