#pragma once

#include <cstdint>
#include <vector>

#include "maskroute/sim/packet.hpp"
#include "maskroute/types.hpp"

namespace maskroute::sim {

/// Packets created in [start, end) are counted. Per-interval aggregates bin
/// counted packets by creation time in steps of `bin_length`.
struct MeasurementWindow {
  Seconds start = 0.0;
  Seconds end = kInfiniteCost;
  Seconds bin_length = 0.0;

  bool contains(Seconds t) const { return t >= start && t < end; }
};

struct IntervalAggregate {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  Seconds delay = 0.0;
};

/// Delay accounting for packets generated inside the measurement window.
/// Counted packets still undelivered at the end of the run are charged
/// their age at that time and tallied in `packets_censored`.
class MetricsLedger {
 public:
  MetricsLedger() = default;
  explicit MetricsLedger(MeasurementWindow window);

  void on_generated(const Packet& p);
  void on_delivered(const Packet& p);
  void censor(const Packet& p, Seconds now);

  const MeasurementWindow& window() const { return window_; }

  Seconds total_delay = 0.0;
  std::uint64_t packets_counted = 0;
  std::uint64_t packets_delivered = 0;
  std::uint64_t packets_censored = 0;
  std::vector<IntervalAggregate> per_interval;

 private:
  std::size_t bin(Seconds created_at) const;
  MeasurementWindow window_;
};

/// Sums of delivered data-packet delays since the last boundary of each
/// interval group, keyed by delivery time.
class DeliveryAccumulator {
 public:
  explicit DeliveryAccumulator(std::size_t groups = 0) : sums_(groups), counts_(groups) {}

  void resize(std::size_t groups);
  void on_delivered(Seconds delay);

  struct Slice {
    Seconds delay = 0.0;
    std::uint64_t delivered = 0;
  };
  /// Returns the group's accumulated slice and starts a new one.
  Slice take(std::size_t group);

 private:
  std::vector<Seconds> sums_;
  std::vector<std::uint64_t> counts_;
};

}  // namespace maskroute::sim
