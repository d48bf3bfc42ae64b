#include "maskroute/experiments/scenario.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace maskroute::experiments {

std::string_view to_string(AgentMode mode) {
  switch (mode) {
    case AgentMode::kShortestPath: return "shortest_path";
    case AgentMode::kFixedProportional: return "fixed_proportional";
    case AgentMode::kFixedSource: return "fixed_source";
    case AgentMode::kLearning: return "learning";
  }
  return "shortest_path";
}

std::vector<NodeId> Scenario::sources() const {
  std::vector<NodeId> out;
  for (const auto& t : traffic) out.push_back(t.source);
  return out;
}

void Scenario::validate() const {
  if (topology.node_count() == 0) throw std::invalid_argument("scenario has no nodes");
  if (agents.size() != topology.node_count()) {
    throw std::invalid_argument("agent modes must cover every node");
  }
  if (traffic.empty()) throw std::invalid_argument("scenario has no traffic");
  std::vector<bool> seen(topology.node_count(), false);
  for (const auto& t : traffic) {
    t.validate();
    if (t.source == t.destination) throw std::invalid_argument("traffic source equals destination");
    if (!topology.reachable(t.source, t.destination)) {
      throw std::invalid_argument("destination " + topology.name(t.destination) +
                                  " unreachable from " + topology.name(t.source));
    }
    if (seen[t.source.index()]) {
      throw std::invalid_argument("router " + topology.name(t.source) +
                                  " sources more than one stream");
    }
    seen[t.source.index()] = true;
  }
  if (!(forward_share >= 0.0 && forward_share <= 1.0)) {
    throw std::invalid_argument("forward_share must be in [0,1]");
  }
  masking.validate();
  learner.validate();
  schedule.validate(interaction.interval_length);
}

Scenario build_gemini(const GeminiOptions& options) {
  Scenario s;
  s.name = "gemini";
  auto& t = s.topology;
  NodeId s1 = t.add_node("S1");
  NodeId s2 = t.add_node("S2");
  NodeId a = t.add_node("A");
  NodeId b = t.add_node("B");
  NodeId top = t.add_node("T");
  NodeId bottom = t.add_node("U");
  NodeId d1 = t.add_node("D1");
  NodeId d2 = t.add_node("D2");
  const double bw = options.link_bandwidth_bps;
  t.add_link(s1, a, bw);
  t.add_link(s1, top, bw);
  t.add_link(s2, a, bw);
  t.add_link(s2, bottom, bw);
  t.add_link(a, b, bw);
  t.add_link(b, d1, bw);
  t.add_link(b, d2, bw);
  t.add_link(top, d1, bw);
  t.add_link(bottom, d2, bw);

  s.traffic.push_back({s1, d1, options.s1_low, options.s1_high, options.packet_bits});
  s.traffic.push_back({s2, d2, options.s2_low, options.s2_high, options.packet_bits});
  s.agents.assign(t.node_count(), AgentMode::kFixedProportional);
  s.agents[s1.index()] = AgentMode::kLearning;
  s.agents[s2.index()] = AgentMode::kLearning;
  s.protocol.reference_packet_bits = options.packet_bits;
  // S1 leads / forms group 0; S2 follows / forms group 1.
  s.interaction.tags = {0, 1};
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file '" + path + "'");
  Scenario s;
  s.name = path;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind)) continue;
    try {
      if (kind == "node") {
        std::string name;
        if (!(fields >> name)) fail("node needs a name");
        s.topology.add_node(name);
      } else if (kind == "link") {
        std::string x, y;
        double bw = 0.0;
        if (!(fields >> x >> y >> bw)) fail("link needs two nodes and a bandwidth");
        s.topology.add_link(s.topology.at(x), s.topology.at(y), bw);
      } else if (kind == "traffic") {
        std::string x, y;
        double low = 0.0, high = 0.0, bits = 1000.0;
        if (!(fields >> x >> y >> low >> high)) fail("traffic needs src dst low high");
        fields >> bits;
        s.traffic.push_back({s.topology.at(x), s.topology.at(y), low, high, bits});
      } else {
        fail("unknown directive '" + kind + "'");
      }
    } catch (const sim::TopologyError& e) {
      fail(e.what());
    }
  }
  s.agents.assign(s.topology.node_count(), AgentMode::kFixedProportional);
  for (const auto& t : s.traffic) s.agents[t.source.index()] = AgentMode::kLearning;
  s.interaction.tags.assign(s.traffic.size(), 0);
  if (s.traffic.size() > 1) s.interaction.tags.back() = 1;
  if (!s.traffic.empty()) s.protocol.reference_packet_bits = s.traffic.front().packet_bits;
  return s;
}

std::size_t forward_slot(const sim::Topology& topology, NodeId node, NodeId destination) {
  auto hops = topology.hop_distances_to(destination);
  auto out = topology.outbound(node);
  std::size_t best = 0;
  std::size_t best_hops = SIZE_MAX;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& h = hops[topology.channel(out[i]).to.index()];
    if (h && *h < best_hops) {
      best_hops = *h;
      best = i;
    }
  }
  return best;
}

proportional::ProportionVector forward_biased_vector(const sim::Topology& topology, NodeId node,
                                                     NodeId destination, double share) {
  const std::size_t m = topology.outbound(node).size();
  if (m == 1) return proportional::ProportionVector::point(1, 0);
  std::vector<double> w(m, (1.0 - share) / static_cast<double>(m - 1));
  w[forward_slot(topology, node, destination)] = share;
  return proportional::ProportionVector(std::move(w));
}

}  // namespace maskroute::experiments
