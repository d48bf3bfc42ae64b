#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "maskroute/types.hpp"

namespace maskroute::sim {

enum class EventKind : std::uint8_t {
  kPacketGenerated,
  kTransmissionComplete,
  kProtocolUpdate,
  kIntervalBoundary,
  kSimulationEnd,
};

std::string_view to_string(EventKind kind);

/// A time-stamped simulator event. `subject` is the traffic stream, channel,
/// or node the event concerns; `tag` carries the interval group for
/// boundaries and the packet id for completions.
struct SimEvent {
  Seconds time = 0.0;
  EventKind kind = EventKind::kSimulationEnd;
  std::uint32_t subject = 0;
  std::uint64_t tag = 0;
};

/// Raised when an event is scheduled before the current clock.
class CausalityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Min-heap on (time, insertion sequence). Equal-time events pop in the
/// order they were scheduled.
class EventQueue {
 public:
  void schedule(const SimEvent& event);

  /// Removes and returns the earliest event, advancing the clock to it.
  std::optional<SimEvent> pop();

  const SimEvent* peek() const;

  Seconds now() const { return clock_; }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  struct Entry {
    SimEvent event;
    std::uint64_t sequence;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.event.time != b.event.time) return a.event.time > b.event.time;
      return a.sequence > b.sequence;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
  std::uint64_t next_sequence_ = 0;
  Seconds clock_ = 0.0;
};

}  // namespace maskroute::sim
