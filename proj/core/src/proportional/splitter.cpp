#include "maskroute/proportional/splitter.hpp"

#include <numeric>
#include <stdexcept>

namespace maskroute::proportional {

bool SplitterState::consistent() const {
  return std::accumulate(pkt_counts.begin(), pkt_counts.end(), std::uint64_t{0}) == pkt_total;
}

std::size_t split_choose(SplitterState& state, const ProportionVector& p) {
  if (state.pkt_counts.size() != p.size()) {
    throw std::invalid_argument("splitter state and proportion vector differ in length");
  }
  const double next_total = static_cast<double>(state.pkt_total + 1);
  std::size_t best = 0;
  double best_gap = next_total * p[0] - static_cast<double>(state.pkt_counts[0]);
  for (std::size_t i = 1; i < p.size(); ++i) {
    double gap = next_total * p[i] - static_cast<double>(state.pkt_counts[i]);
    if (gap > best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  ++state.pkt_counts[best];
  ++state.pkt_total;
  return best;
}

void reset_splitter(SplitterState& state) {
  std::fill(state.pkt_counts.begin(), state.pkt_counts.end(), 0);
  state.pkt_total = 0;
}

DeterministicSplitter::DeterministicSplitter(ProportionVector applied)
    : applied_(std::move(applied)), state_(applied_.size()) {}

bool DeterministicSplitter::update(const ProportionVector& applied) {
  if (applied_.distance(applied) <= kChangeTolerance) return false;
  if (applied.size() != state_.pkt_counts.size()) state_ = SplitterState(applied.size());
  applied_ = applied;
  reset_splitter(state_);
  return true;
}

std::size_t DeterministicSplitter::choose() {
  if (extension_) extension_->before_choose(state_, applied_);
  return split_choose(state_, applied_);
}

}  // namespace maskroute::proportional
