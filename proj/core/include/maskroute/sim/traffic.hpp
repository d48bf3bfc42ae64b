#pragma once

#include <stdexcept>
#include <string>

#include "maskroute/types.hpp"

namespace maskroute::sim {

/// A packet stream with i.i.d. uniform interarrival times in [low, high].
struct TrafficSpec {
  NodeId source;
  NodeId destination;
  Seconds interarrival_low = 0.25;
  Seconds interarrival_high = 0.25;
  double packet_bits = 1000.0;
  /// First packet is generated one interarrival after `start`; none at or
  /// after `stop`.
  Seconds start = 0.0;
  Seconds stop = kInfiniteCost;

  void validate() const {
    if (!(interarrival_low > 0.0) || !(interarrival_high >= interarrival_low)) {
      throw std::invalid_argument("invalid interarrival interval [" +
                                  std::to_string(interarrival_low) + ", " +
                                  std::to_string(interarrival_high) + "]");
    }
    if (!(packet_bits > 0.0)) throw std::invalid_argument("packet size must be positive");
  }
};

}  // namespace maskroute::sim
