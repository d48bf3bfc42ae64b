#include <cmath>
#include <random>

#include "doctest.h"
#include "maskroute/proportional/masking.hpp"
#include "maskroute/proportional/proportion_vector.hpp"
#include "maskroute/proportional/proportional_agent.hpp"
#include "maskroute/proportional/splitter.hpp"
#include "maskroute/routing/distance_vector.hpp"
#include "support/oracles.hpp"

using namespace maskroute;
using namespace maskroute::proportional;

namespace {

const ProportionVector kTable1{0.59, 0.31, 0.1};

std::vector<double> gaps(const SplitterState& s, const ProportionVector& p) {
  std::vector<double> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.push_back(static_cast<double>(s.pkt_total + 1) * p[i] -
                  static_cast<double>(s.pkt_counts[i]));
  }
  return out;
}

void check_vector(const ProportionVector& got, std::initializer_list<double> want,
                  double eps = 1e-12) {
  REQUIRE(got.size() == want.size());
  std::size_t i = 0;
  for (double w : want) CHECK(got[i++] == doctest::Approx(w).epsilon(eps));
}

}  // namespace

TEST_CASE("proportion vectors validate their invariants") {
  CHECK_NOTHROW(ProportionVector{0.25, 0.75});
  CHECK_THROWS_AS(ProportionVector({0.5, 0.6}), InvalidProportions);
  CHECK_THROWS_AS(ProportionVector({-0.1, 1.1}), InvalidProportions);
  CHECK_THROWS_AS(ProportionVector(std::vector<double>{}), InvalidProportions);
  auto b = ProportionVector::binary(0.3, 1);
  CHECK(b[1] == 0.3);
  CHECK(b[0] == doctest::Approx(0.7));
  CHECK(ProportionVector::uniform(4)[2] == 0.25);
  CHECK(ProportionVector::point(3, 2)[2] == 1.0);
  CHECK(ProportionVector({0.5, 0.5}).distance(ProportionVector{0.4, 0.6}) ==
        doctest::Approx(0.1));
}

TEST_CASE("splitter reproduces the worked ten-packet sequence") {
  // Rows: counts before the choice, differences, chosen link.
  struct Row {
    std::vector<std::uint64_t> counts;
    std::vector<double> diffs;
    std::size_t chosen;
  };
  const std::vector<Row> rows = {
      {{0, 0, 0}, {0.59, 0.31, 0.1}, 0},   {{1, 0, 0}, {0.18, 0.62, 0.2}, 1},
      {{1, 1, 0}, {0.77, -0.07, 0.3}, 0},  {{2, 1, 0}, {0.36, 0.24, 0.4}, 2},
      {{2, 1, 1}, {0.95, 0.55, -0.5}, 0},  {{3, 1, 1}, {0.54, 0.86, -0.4}, 1},
      {{3, 2, 1}, {1.13, 0.17, -0.3}, 0},  {{4, 2, 1}, {0.72, 0.48, -0.2}, 0},
      {{5, 2, 1}, {0.31, 0.79, -0.1}, 1},  {{5, 3, 1}, {0.9, 0.1, 0.0}, 0},
  };
  SplitterState s(3);
  for (const Row& r : rows) {
    CHECK(s.pkt_counts == r.counts);
    auto d = gaps(s, kTable1);
    for (std::size_t i = 0; i < 3; ++i) CHECK(d[i] == doctest::Approx(r.diffs[i]).epsilon(1e-9));
    CHECK(split_choose(s, kTable1) == r.chosen);
    CHECK(s.consistent());
  }
  CHECK(s.pkt_counts == std::vector<std::uint64_t>{6, 3, 1});
  CHECK(s.pkt_total == 10);
}

TEST_CASE("reset zeroes the splitter and is idempotent") {
  SplitterState s(3);
  for (int i = 0; i < 7; ++i) split_choose(s, kTable1);
  reset_splitter(s);
  CHECK(s.pkt_counts == std::vector<std::uint64_t>{0, 0, 0});
  CHECK(s.pkt_total == 0);
  reset_splitter(s);
  CHECK(s.pkt_total == 0);
  for (int i = 0; i < 10; ++i) split_choose(s, kTable1);
  CHECK(s.pkt_counts == std::vector<std::uint64_t>{6, 3, 1});
}

TEST_CASE("deterministic splitter resets only when the applied vector moves") {
  DeterministicSplitter d(kTable1);
  for (int i = 0; i < 4; ++i) d.choose();
  CHECK_FALSE(d.update(ProportionVector{0.59, 0.31, 0.1}));
  CHECK(d.state().pkt_total == 4);
  CHECK(d.update(ProportionVector{0.6, 0.3, 0.1}));
  CHECK(d.state().pkt_total == 0);
}

TEST_CASE("splitter extension hook runs before each choice") {
  struct Counter : SplitterExtension {
    int calls = 0;
    void before_choose(SplitterState&, const ProportionVector&) override { ++calls; }
  } ext;
  DeterministicSplitter d(kTable1);
  d.set_extension(&ext);
  d.choose();
  d.choose();
  CHECK(ext.calls == 2);
}

TEST_CASE("greedy splitting matches exhaustive search on short horizons") {
  for (std::size_t m : {2u, 3u}) {
    for (const auto& p : maskroute::testing::proportion_grid(m, 10)) {
      SplitterState s(m);
      for (std::size_t n = 1; n <= 6; ++n) {
        split_choose(s, p);
        auto got = maskroute::testing::discrepancy(s.pkt_counts, p, n);
        auto best = maskroute::testing::exhaustive_minimum(p, n);
        CHECK(got.l1 == doctest::Approx(best.l1).epsilon(1e-9));
        CHECK(got.l2 == doctest::Approx(best.l2).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("hard mask examples") {
  const std::vector<double> v1{3.0, 7.0};
  check_vector(hard_mask(ProportionVector{0.5, 0.5}, 5.0, v1), {1.0, 0.0});

  const std::vector<double> v2{2.0, 12.0, 4.0};
  check_vector(hard_mask(kTable1, 10.0, v2), {0.59 / 0.69, 0.0, 0.10 / 0.69});
  auto approx = hard_mask(kTable1, 10.0, v2);
  CHECK(approx[0] == doctest::Approx(0.8551).epsilon(1e-4));
  CHECK(approx[2] == doctest::Approx(0.1449).epsilon(1e-3));

  const std::vector<double> v3{1.0, 2.0, 3.0};
  check_vector(hard_mask(kTable1, 10.0, v3), {0.59, 0.31, 0.1});
}

TEST_CASE("a neighbor level with the router is masked") {
  const std::vector<double> v{5.0, 4.0};
  check_vector(hard_mask(ProportionVector{0.5, 0.5}, 5.0, v), {0.0, 1.0});
  const std::vector<double> all_up{5.0, 6.0};
  CHECK_THROWS_AS(hard_mask(ProportionVector{0.5, 0.5}, 5.0, all_up), NoAdmissibleLink);
}

TEST_CASE("soft mask examples") {
  const std::vector<double> v{2.0, 6.0};
  const double e2 = std::exp(2.0), e1 = std::exp(1.0);
  auto x = soft_mask(ProportionVector{0.5, 0.5}, 10.0, v,
                     MaskingConfig{MaskingMode::kSoftExponential, 0.25});
  check_vector(x, {e2 / (e2 + e1), e1 / (e2 + e1)});
  CHECK(x[0] == doctest::Approx(0.7311).epsilon(1e-4));
  CHECK(x[1] == doctest::Approx(0.2689).epsilon(1e-4));

  auto pw = soft_mask(ProportionVector{0.5, 0.5}, 10.0, v,
                      MaskingConfig{MaskingMode::kSoftPower, 1.0});
  check_vector(pw, {2.0 / 3.0, 1.0 / 3.0});
}

TEST_CASE("zero beta exponential masking equals hard masking") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> w{u(rng) + 0.1, u(rng) + 0.1, u(rng) + 0.1};
    double sum = w[0] + w[1] + w[2];
    for (double& x : w) x /= sum;
    w[0] = 1.0 - w[1] - w[2];
    ProportionVector p(w);
    std::vector<double> v{u(rng), u(rng), 0.0};
    const double self = 15.0;
    auto hard = hard_mask(p, self, v);
    auto soft = soft_mask(p, self, v, MaskingConfig{MaskingMode::kSoftExponential, 0.0});
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(hard[k] - soft[k]) <= 1e-12);
  }
}

TEST_CASE("power mask fades continuously at the boundary") {
  const ProportionVector p{0.5, 0.5};
  const MaskingConfig cfg{MaskingMode::kSoftPower, 1.5};
  double last = 1.0;
  for (double eps : {1.0, 0.1, 0.01, 1e-3, 1e-4, 1e-6}) {
    const std::vector<double> v{2.0, 10.0 - eps};
    const double share = soft_mask(p, 10.0, v, cfg)[1];
    CHECK(share < last);
    last = share;
  }
  CHECK(last < 1e-8);
}

TEST_CASE("exponential mask attenuates monotonically toward the boundary") {
  const ProportionVector p{0.5, 0.5};
  const MaskingConfig cfg{MaskingMode::kSoftExponential, 1.0};
  double last = 1.0;
  for (double vi : {3.0, 5.0, 7.0, 9.0, 9.9, 9.999}) {
    const std::vector<double> v{2.0, vi};
    const double share = soft_mask(p, 10.0, v, cfg)[1];
    CHECK(share <= last);
    last = share;
  }
  const std::vector<double> at{2.0, 10.0};
  CHECK(soft_mask(p, 10.0, at, cfg)[1] == 0.0);
}

TEST_CASE("exponential mask survives very large gaps") {
  const std::vector<double> v{0.0, 1e6};
  auto x = soft_mask(ProportionVector{0.5, 0.5}, 2e6, v,
                     MaskingConfig{MaskingMode::kSoftExponential, 1.0});
  check_vector(x, {1.0, 0.0});
  const std::vector<double> only_tiny{1e6, 3e6};
  auto y = soft_mask(ProportionVector{0.5, 0.5}, 2e6, only_tiny,
                     MaskingConfig{MaskingMode::kSoftExponential, 1.0});
  check_vector(y, {1.0, 0.0});
}

TEST_CASE("masking mode names round-trip") {
  for (auto m : {MaskingMode::kNone, MaskingMode::kHard, MaskingMode::kSoftExponential,
                 MaskingMode::kSoftPower}) {
    CHECK(parse_masking_mode(to_string(m)) == m);
  }
  CHECK_THROWS(parse_masking_mode("gentle"));
  CHECK_THROWS(MaskingConfig{MaskingMode::kSoftPower, -1.0}.validate());
}

namespace {

// Router 0 with neighbors 1, 2, 3; destination 4.
routing::RoutingTable router_with_reports(double r1, double r2, double r3) {
  const std::vector<NodeId> nb{NodeId(1), NodeId(2), NodeId(3)};
  routing::RoutingTable t(NodeId(0), nb, 5);
  const std::vector<double> costs{1.0, 1.0, 1.0};
  t.set_link_costs(costs, 0.0);
  auto report = [&](std::uint32_t n, double c) {
    routing::DistanceVectorMessage m;
    m.sender = NodeId(n);
    m.vector.push_back({NodeId(4), c});
    t.apply(m, 1.0, 0.0);
  };
  report(1, r1);
  report(2, r2);
  report(3, r3);
  return t;
}

}  // namespace

TEST_CASE("applied vector masks against reported neighbor costs") {
  auto t = router_with_reports(2.0, 12.0, 4.0);
  REQUIRE(t.ordering_value(NodeId(4)) == 3.0);
  bool fallback = true;
  auto a = applied_vector(t, NodeId(4), kTable1, MaskingConfig{MaskingMode::kHard, 1.0},
                          &fallback);
  REQUIRE(a.has_value());
  CHECK_FALSE(fallback);
  check_vector(*a, {1.0, 0.0, 0.0});
}

TEST_CASE("no admissible link falls back to the best neighbor") {
  auto t = router_with_reports(2.0, 12.0, 4.0);
  bool fallback = false;
  auto a = applied_vector(t, NodeId(4), ProportionVector{0.0, 0.5, 0.5},
                          MaskingConfig{MaskingMode::kHard, 1.0}, &fallback);
  REQUIRE(a.has_value());
  CHECK(fallback);
  check_vector(*a, {1.0, 0.0, 0.0});
}

TEST_CASE("proportional agent splits over admissible links") {
  auto t = router_with_reports(1.0, 1.5, 9.0);
  ProportionalAgent agent(3, 5, MaskingConfig{MaskingMode::kHard, 1.0});
  // No base vector yet: plain shortest path.
  CHECK(agent.route(t, NodeId(4)) == 0u);
  agent.set_base(NodeId(4), ProportionVector{0.5, 0.25, 0.25});
  std::vector<std::uint64_t> counts(3, 0);
  for (int i = 0; i < 300; ++i) ++counts[*agent.route(t, NodeId(4))];
  CHECK(counts[0] == 200);
  CHECK(counts[1] == 100);
  CHECK(counts[2] == 0);
  REQUIRE(agent.applied(NodeId(4)) != nullptr);
  CHECK((*agent.applied(NodeId(4)))[0] == doctest::Approx(2.0 / 3.0));
  CHECK(agent.splitter_state(NodeId(4))->consistent());
  CHECK_THROWS_AS(agent.set_base(NodeId(4), ProportionVector{1.0}), InvalidProportions);
}

TEST_CASE("proportional agent holds packets for unknown destinations") {
  const std::vector<NodeId> nb{NodeId(1)};
  routing::RoutingTable t(NodeId(0), nb, 3);
  ProportionalAgent agent(1, 3, MaskingConfig{});
  agent.set_base(NodeId(2), ProportionVector{1.0});
  CHECK_FALSE(agent.route(t, NodeId(2)).has_value());
}

TEST_CASE("table refresh resets counters only when the applied vector changes") {
  auto t = router_with_reports(1.0, 1.5, 9.0);
  ProportionalAgent agent(3, 5, MaskingConfig{MaskingMode::kSoftExponential, 1.0});
  agent.set_base(NodeId(4), ProportionVector{0.5, 0.25, 0.25});
  agent.route(t, NodeId(4));
  agent.on_table_refresh(t, 1.0);
  CHECK(agent.reset_count() == 0);
  CHECK(agent.splitter_state(NodeId(4))->pkt_total == 1);
  auto moved = router_with_reports(1.0, 1.2, 9.0);
  agent.on_table_refresh(moved, 2.0);
  CHECK(agent.reset_count() == 1);
  CHECK(agent.splitter_state(NodeId(4))->pkt_total == 0);
}
