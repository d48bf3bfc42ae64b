#include "maskroute/sim/event_queue.hpp"

#include <string>

namespace maskroute::sim {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kPacketGenerated: return "PacketGenerated";
    case EventKind::kTransmissionComplete: return "TransmissionComplete";
    case EventKind::kProtocolUpdate: return "ProtocolUpdate";
    case EventKind::kIntervalBoundary: return "IntervalBoundary";
    case EventKind::kSimulationEnd: return "SimulationEnd";
  }
  return "Unknown";
}

void EventQueue::schedule(const SimEvent& event) {
  if (event.time < clock_) {
    throw CausalityError("event " + std::string(to_string(event.kind)) + " scheduled at t=" +
                         std::to_string(event.time) + " before clock t=" + std::to_string(clock_));
  }
  heap_.push(Entry{event, next_sequence_++});
}

std::optional<SimEvent> EventQueue::pop() {
  if (heap_.empty()) return std::nullopt;
  SimEvent e = heap_.top().event;
  heap_.pop();
  clock_ = e.time;
  return e;
}

const SimEvent* EventQueue::peek() const { return heap_.empty() ? nullptr : &heap_.top().event; }

}  // namespace maskroute::sim
