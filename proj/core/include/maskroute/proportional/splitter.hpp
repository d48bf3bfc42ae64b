#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "maskroute/proportional/proportion_vector.hpp"

namespace maskroute::proportional {

/// Packets sent per outbound link since the last reset.
struct SplitterState {
  std::vector<std::uint64_t> pkt_counts;
  std::uint64_t pkt_total = 0;

  SplitterState() = default;
  explicit SplitterState(std::size_t links) : pkt_counts(links, 0) {}

  bool consistent() const;
};

/// Deterministic proportional routing: picks the link with the largest gap
/// (pkt_total + 1) * p_i - pkt_i, lowest index on ties, and counts the packet.
std::size_t split_choose(SplitterState& state, const ProportionVector& p);

void reset_splitter(SplitterState& state);

/// Extension point invoked before each choice. Data aging and
/// out-of-order avoidance would hook in here; the default does nothing.
class SplitterExtension {
 public:
  virtual ~SplitterExtension() = default;
  virtual void before_choose(SplitterState& /*state*/, const ProportionVector& /*p*/) {}
};

/// A splitter bound to the applied vector it is realizing. Counters restart
/// whenever the applied vector moves by more than `change_tolerance` in any
/// component.
class DeterministicSplitter {
 public:
  static constexpr double kChangeTolerance = 1e-9;

  explicit DeterministicSplitter(ProportionVector applied);

  /// Installs a new applied vector. Returns true if the counters were reset.
  bool update(const ProportionVector& applied);
  std::size_t choose();

  const ProportionVector& applied() const { return applied_; }
  const SplitterState& state() const { return state_; }
  void set_extension(SplitterExtension* ext) { extension_ = ext; }

 private:
  ProportionVector applied_;
  SplitterState state_;
  SplitterExtension* extension_ = nullptr;
};

}  // namespace maskroute::proportional
