#include "maskroute/sim/simulator.hpp"

#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace maskroute::sim {

struct Simulator::ChannelState {
  struct Queued {
    std::uint32_t slot;
    Seconds enqueued_at;
  };
  std::deque<Queued> fifo;
  bool busy = false;
  Queued current{};
  Seconds tx_start = 0.0;
  routing::LinkCostEstimator estimator;
  std::uint64_t protocol_messages = 0;
  double protocol_bits = 0.0;
};

struct Simulator::RouterState {
  routing::RoutingTable table;
  std::unique_ptr<RoutingAgent> agent;
  std::vector<std::uint32_t> parked;
};

struct Simulator::TrafficState {
  TrafficSpec spec;
  RandomStream rng;

  Seconds draw() {
    if (spec.interarrival_low == spec.interarrival_high) return spec.interarrival_low;
    std::uniform_real_distribution<double> u(spec.interarrival_low, spec.interarrival_high);
    return u(rng);
  }
};

Simulator::Simulator(Topology topology, SimulatorOptions options)
    : topology_(std::move(topology)), options_(options), ledger_(options.window) {
  const auto& proto = options_.protocol;
  if (proto.enabled && !(proto.period > 0.0)) {
    throw std::invalid_argument("protocol period must be positive");
  }
  if (!(proto.bits_per_entry >= 0.0)) {
    throw std::invalid_argument("protocol entry size must be non-negative");
  }
  channels_.reserve(topology_.channel_count());
  for (const Channel& c : topology_.channels()) {
    Seconds floor = proto.reference_packet_bits / c.bandwidth_bps;
    channels_.push_back(ChannelState{{}, false, {}, 0.0,
                                     routing::LinkCostEstimator(proto.ewma_alpha, floor), 0, 0.0});
  }
  const std::size_t n = topology_.node_count();
  routers_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    NodeId id(static_cast<std::uint32_t>(i));
    auto neighbors = topology_.neighbors(id);
    routers_.push_back(RouterState{routing::RoutingTable(id, neighbors, n), nullptr, {}});
  }
  if (proto.enabled) {
    // Stagger routers across the period so broadcasts do not collide.
    for (std::size_t i = 0; i < n; ++i) {
      Seconds phase = proto.period * static_cast<double>(i) / static_cast<double>(n);
      events_.schedule(
          SimEvent{phase, EventKind::kProtocolUpdate, static_cast<std::uint32_t>(i), 0});
    }
  }
}

Simulator::~Simulator() = default;

void Simulator::set_agent(NodeId node, std::unique_ptr<RoutingAgent> agent) {
  routers_.at(node.index()).agent = std::move(agent);
}

RoutingAgent& Simulator::agent(NodeId node) {
  auto& a = routers_.at(node.index()).agent;
  if (!a) throw std::logic_error("router " + topology_.name(node) + " has no agent");
  return *a;
}

const routing::RoutingTable& Simulator::table(NodeId node) const {
  return routers_.at(node.index()).table;
}

void Simulator::add_traffic(const TrafficSpec& spec) {
  spec.validate();
  if (spec.source.index() >= topology_.node_count() ||
      spec.destination.index() >= topology_.node_count()) {
    throw std::invalid_argument("traffic endpoint out of range");
  }
  auto index = static_cast<std::uint32_t>(traffic_.size());
  traffic_.push_back(
      TrafficState{spec, make_stream(options_.seed, StreamPurpose::kTraffic, index)});
  Seconds first = spec.start + traffic_.back().draw();
  if (first < spec.stop) {
    events_.schedule(SimEvent{first, EventKind::kPacketGenerated, index, 0});
  }
}

void Simulator::set_interval_listener(IntervalListener* listener, std::size_t groups) {
  listener_ = listener;
  accumulator_.resize(groups);
}

void Simulator::schedule_boundary(Seconds time, std::uint32_t group) {
  events_.schedule(SimEvent{time, EventKind::kIntervalBoundary, group, 0});
}

DeliveryAccumulator::Slice Simulator::take_interval(std::uint32_t group) {
  return accumulator_.take(group);
}

std::uint32_t Simulator::allocate_packet() {
  if (!free_packets_.empty()) {
    std::uint32_t slot = free_packets_.back();
    free_packets_.pop_back();
    return slot;
  }
  packets_.emplace_back();
  return static_cast<std::uint32_t>(packets_.size() - 1);
}

void Simulator::release_packet(std::uint32_t slot) {
  Packet& p = packets_[slot];
  p.hop_trace.clear();
  p.hops.clear();
  p.delivered_at.reset();
  p.id = ~PacketId{0};
  free_packets_.push_back(slot);
}

PacketId Simulator::inject(NodeId source, NodeId destination, double size_bits) {
  if (!(size_bits > 0.0)) throw std::invalid_argument("packet size must be positive");
  std::uint32_t slot = allocate_packet();
  Packet& p = packets_[slot];
  p.id = next_packet_id_++;
  p.kind = PacketKind::kData;
  p.source = source;
  p.destination = destination;
  p.size_bits = size_bits;
  p.created_at = now();
  p.counted = ledger_.window().contains(p.created_at);
  ++counts_.generated;
  ledger_.on_generated(p);
  PacketId id = p.id;
  trace(now(), EventKind::kPacketGenerated, source, id);
  arrive(slot, source);
  return id;
}

void Simulator::advance(Seconds until) {
  if (until < now()) throw CausalityError("cannot advance backwards");
  events_.schedule(SimEvent{until, EventKind::kSimulationEnd, 0, 0});
  while (auto e = events_.pop()) {
    dispatch(*e);
    if (e->kind == EventKind::kSimulationEnd && e->time == until) break;
  }
}

const MetricsLedger& Simulator::run(Seconds until) {
  advance(until);
  if (!finalized_) {
    finalized_ = true;
    for (const Packet& p : packets_) {
      if (p.id != ~PacketId{0} && p.kind == PacketKind::kData && !p.delivered_at) {
        ledger_.censor(p, until);
      }
    }
  }
  return ledger_;
}

void Simulator::dispatch(const SimEvent& e) {
  switch (e.kind) {
    case EventKind::kPacketGenerated: on_generated(e.subject); break;
    case EventKind::kTransmissionComplete: on_transmission_complete(ChannelId(e.subject)); break;
    case EventKind::kProtocolUpdate: on_protocol_update(NodeId(e.subject)); break;
    case EventKind::kIntervalBoundary:
      trace(e.time, e.kind, NodeId(0), std::nullopt);
      if (listener_) listener_->on_interval_boundary(*this, e.subject, e.time);
      break;
    case EventKind::kSimulationEnd: trace(e.time, e.kind, NodeId(0), std::nullopt); break;
  }
}

void Simulator::on_generated(std::uint32_t stream) {
  TrafficState& ts = traffic_[stream];
  inject(ts.spec.source, ts.spec.destination, ts.spec.packet_bits);
  Seconds next = now() + ts.draw();
  if (next < ts.spec.stop) {
    events_.schedule(SimEvent{next, EventKind::kPacketGenerated, stream, 0});
  }
}

void Simulator::arrive(std::uint32_t slot, NodeId node) {
  Packet& p = packets_[slot];
  if (options_.trace_hops) p.hop_trace.push_back(node);
  if (node == p.destination) {
    deliver(slot);
  } else {
    forward(slot, node);
  }
}

void Simulator::forward(std::uint32_t slot, NodeId node) {
  RouterState& r = routers_[node.index()];
  if (!r.agent) throw std::logic_error("router " + topology_.name(node) + " has no agent");
  auto choice = r.agent->route(r.table, packets_[slot].destination);
  if (!choice) {
    r.parked.push_back(slot);
    ++counts_.parked;
    return;
  }
  auto out = topology_.outbound(node);
  if (*choice >= out.size()) throw std::logic_error("agent chose a nonexistent link");
  transmit(slot, out[*choice]);
}

void Simulator::deliver(std::uint32_t slot) {
  Packet& p = packets_[slot];
  p.delivered_at = now();
  ++counts_.delivered;
  ledger_.on_delivered(p);
  accumulator_.on_delivered(p.delay());
  if (options_.trace_hops) delivered_log_.push_back(p);
  release_packet(slot);
}

void Simulator::transmit(std::uint32_t slot, ChannelId c) {
  ChannelState& ch = channels_[c.index()];
  if (packets_[slot].kind == PacketKind::kData) ++counts_.queued;
  ch.fifo.push_back({slot, now()});
  if (!ch.busy) start_transmission(c);
}

void Simulator::start_transmission(ChannelId c) {
  ChannelState& ch = channels_[c.index()];
  ch.current = ch.fifo.front();
  ch.fifo.pop_front();
  ch.busy = true;
  ch.tx_start = now();
  const Packet& p = packets_[ch.current.slot];
  if (p.kind == PacketKind::kData) {
    --counts_.queued;
    ++counts_.in_flight;
  }
  Seconds duration = p.size_bits / topology_.channel(c).bandwidth_bps;
  events_.schedule(
      SimEvent{now() + duration, EventKind::kTransmissionComplete, c.value, ch.current.slot});
}

void Simulator::on_transmission_complete(ChannelId c) {
  ChannelState& ch = channels_[c.index()];
  const auto done = ch.current;
  ch.busy = false;
  ch.estimator.observe(now() - done.enqueued_at);
  Packet& p = packets_[done.slot];
  const Channel& desc = topology_.channel(c);
  trace(now(), EventKind::kTransmissionComplete, desc.to, p.id);
  if (p.kind == PacketKind::kData) {
    --counts_.in_flight;
    if (options_.trace_hops) {
      p.hops.push_back(HopRecord{desc.from, c, done.enqueued_at, ch.tx_start, now()});
    }
  } else {
    ++ch.protocol_messages;
    ch.protocol_bits += p.size_bits;
  }
  if (!ch.fifo.empty()) start_transmission(c);

  if (p.kind == PacketKind::kProtocol) {
    // Protocol packets travel one hop; apply the vector at the receiver.
    RouterState& r = routers_[desc.to.index()];
    auto back = topology_.channel_between(desc.to, desc.from);
    r.table.apply(messages_[p.message_slot], link_cost(*back), now());
    free_messages_.push_back(p.message_slot);
    release_packet(done.slot);
    release_parked(desc.to);
  } else {
    arrive(done.slot, desc.to);
  }
}

void Simulator::on_protocol_update(NodeId node) {
  RouterState& r = routers_[node.index()];
  auto out = topology_.outbound(node);
  std::vector<Seconds> costs;
  costs.reserve(out.size());
  for (ChannelId c : out) costs.push_back(link_cost(c));
  r.table.set_link_costs(costs, now());
  if (r.agent) r.agent->on_table_refresh(r.table, now());
  if (options_.table_dump) r.table.dump(*options_.table_dump, now());
  trace(now(), EventKind::kProtocolUpdate, node, std::nullopt);

  routing::DistanceVectorMessage msg = r.table.make_message(options_.protocol.bits_per_entry);
  for (ChannelId c : out) {
    const Channel& desc = topology_.channel(c);
    if (msg.size_bits <= 0.0) {
      // Zero-size vectors cost no bandwidth and arrive at once.
      ++channels_[c.index()].protocol_messages;
      RouterState& peer = routers_[desc.to.index()];
      auto back = topology_.channel_between(desc.to, desc.from);
      peer.table.apply(msg, link_cost(*back), now());
      release_parked(desc.to);
      continue;
    }
    std::uint32_t mslot;
    if (!free_messages_.empty()) {
      mslot = free_messages_.back();
      free_messages_.pop_back();
      messages_[mslot] = msg;
    } else {
      messages_.push_back(msg);
      mslot = static_cast<std::uint32_t>(messages_.size() - 1);
    }
    std::uint32_t slot = allocate_packet();
    Packet& p = packets_[slot];
    p.id = next_packet_id_++;
    p.kind = PacketKind::kProtocol;
    p.source = node;
    p.destination = desc.to;
    p.size_bits = msg.size_bits;
    p.created_at = now();
    p.counted = false;
    p.message_slot = mslot;
    transmit(slot, c);
  }
  events_.schedule(SimEvent{now() + options_.protocol.period, EventKind::kProtocolUpdate,
                            node.value, 0});
}

void Simulator::release_parked(NodeId node) {
  RouterState& r = routers_[node.index()];
  if (r.parked.empty()) return;
  std::vector<std::uint32_t> waiting;
  waiting.swap(r.parked);
  counts_.parked -= waiting.size();
  for (std::uint32_t slot : waiting) forward(slot, node);
}

void Simulator::trace(Seconds t, EventKind kind, NodeId node, std::optional<PacketId> packet) {
  if (!options_.event_trace) return;
  auto& out = *options_.event_trace;
  out << t << '\t' << to_string(kind) << '\t' << node.value << '\t';
  if (packet) {
    out << *packet;
  } else {
    out << '-';
  }
  out << '\n';
}

ConservationCounts Simulator::conservation() const { return counts_; }

std::uint64_t Simulator::protocol_messages_sent(ChannelId c) const {
  return channels_.at(c.index()).protocol_messages;
}

double Simulator::protocol_bits_sent(ChannelId c) const {
  return channels_.at(c.index()).protocol_bits;
}

Seconds Simulator::link_cost(ChannelId c) const {
  const Channel& desc = topology_.channel(c);
  if (desc.static_cost) return *desc.static_cost;
  return channels_[c.index()].estimator.estimate();
}

}  // namespace maskroute::sim
