#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "maskroute/routing/distance_vector.hpp"
#include "maskroute/sim/event_queue.hpp"
#include "maskroute/sim/metrics.hpp"
#include "maskroute/sim/packet.hpp"
#include "maskroute/sim/random.hpp"
#include "maskroute/sim/topology.hpp"
#include "maskroute/sim/traffic.hpp"

namespace maskroute::sim {

/// Per-router forwarding policy. Slots index the router's outbound channels
/// (equivalently its routing-table neighbor slots), both sorted by neighbor id.
class RoutingAgent {
 public:
  virtual ~RoutingAgent() = default;

  /// Outbound slot for a data packet bound to `destination`, or nullopt to
  /// hold the packet until the routing table learns the destination.
  virtual std::optional<std::size_t> route(const routing::RoutingTable& table,
                                           NodeId destination) = 0;

  /// Called after the router refreshes its table, just before it broadcasts.
  virtual void on_table_refresh(const routing::RoutingTable& /*table*/, Seconds /*now*/) {}
};

class Simulator;

/// Receives interval-boundary events.
class IntervalListener {
 public:
  virtual ~IntervalListener() = default;
  virtual void on_interval_boundary(Simulator& sim, std::uint32_t group, Seconds now) = 0;
};

struct ProtocolConfig {
  bool enabled = true;
  Seconds period = 1.0;
  double bits_per_entry = 64.0;
  double ewma_alpha = 0.1;
  /// Size of the packet whose transmission time floors link-cost estimates.
  double reference_packet_bits = 1000.0;
};

struct SimulatorOptions {
  ProtocolConfig protocol;
  MeasurementWindow window;
  std::uint64_t seed = 1;
  /// Record hop traces and keep every delivered data packet.
  bool trace_hops = false;
  std::ostream* event_trace = nullptr;
  std::ostream* table_dump = nullptr;
};

/// Data packets by location; generated == delivered + in_flight + queued + parked.
struct ConservationCounts {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t in_flight = 0;
  std::uint64_t queued = 0;
  std::uint64_t parked = 0;

  bool balanced() const { return generated == delivered + in_flight + queued + parked; }
};

/// Single-threaded discrete-event network simulator. Links have zero
/// propagation delay; each channel serves an unbounded FIFO at its
/// bandwidth. Routers run distance-vector routing with real protocol
/// packets and forward data through their RoutingAgent at zero cost.
class Simulator {
 public:
  Simulator(Topology topology, SimulatorOptions options);
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  const Topology& topology() const { return topology_; }
  Seconds now() const { return events_.now(); }

  void set_agent(NodeId node, std::unique_ptr<RoutingAgent> agent);
  RoutingAgent& agent(NodeId node);
  const routing::RoutingTable& table(NodeId node) const;

  void add_traffic(const TrafficSpec& spec);

  void set_interval_listener(IntervalListener* listener, std::size_t groups);
  void schedule_boundary(Seconds time, std::uint32_t group);
  DeliveryAccumulator::Slice take_interval(std::uint32_t group);

  void schedule(const SimEvent& event) { events_.schedule(event); }

  /// Injects a data packet at `source` now, bypassing traffic streams.
  PacketId inject(NodeId source, NodeId destination, double size_bits);

  /// Dispatches every event with time <= until. Repeated calls continue the
  /// run; counted packets still in the network are not censored.
  void advance(Seconds until);

  /// advance(until), then charges undelivered counted packets and returns
  /// the ledger.
  const MetricsLedger& run(Seconds until);

  const MetricsLedger& ledger() const { return ledger_; }
  ConservationCounts conservation() const;

  /// Delivered data packets (only when trace_hops is on).
  const std::vector<Packet>& delivered_log() const { return delivered_log_; }

  std::uint64_t protocol_messages_sent(ChannelId c) const;
  double protocol_bits_sent(ChannelId c) const;
  Seconds link_cost(ChannelId c) const;

 private:
  struct ChannelState;
  struct RouterState;
  struct TrafficState;

  std::uint32_t allocate_packet();
  void release_packet(std::uint32_t slot);

  void dispatch(const SimEvent& e);
  void on_generated(std::uint32_t stream);
  void on_transmission_complete(ChannelId c);
  void on_protocol_update(NodeId node);

  void arrive(std::uint32_t slot, NodeId node);
  void forward(std::uint32_t slot, NodeId node);
  void deliver(std::uint32_t slot);
  void transmit(std::uint32_t slot, ChannelId c);
  void start_transmission(ChannelId c);
  void release_parked(NodeId node);
  void trace(Seconds t, EventKind kind, NodeId node, std::optional<PacketId> packet);

  Topology topology_;
  SimulatorOptions options_;
  EventQueue events_;
  MetricsLedger ledger_;
  DeliveryAccumulator accumulator_;
  IntervalListener* listener_ = nullptr;

  std::vector<ChannelState> channels_;
  std::vector<RouterState> routers_;
  std::vector<TrafficState> traffic_;

  std::vector<Packet> packets_;
  std::vector<std::uint32_t> free_packets_;
  std::vector<routing::DistanceVectorMessage> messages_;
  std::vector<std::uint32_t> free_messages_;
  PacketId next_packet_id_ = 0;

  ConservationCounts counts_;
  std::vector<Packet> delivered_log_;
  bool finalized_ = false;
};

}  // namespace maskroute::sim
