#include "maskroute/sim/metrics.hpp"

#include <cmath>

namespace maskroute::sim {

MetricsLedger::MetricsLedger(MeasurementWindow window) : window_(window) {
  if (window_.bin_length > 0.0 && std::isfinite(window_.end)) {
    auto bins = static_cast<std::size_t>(
        std::ceil((window_.end - window_.start) / window_.bin_length - 1e-9));
    per_interval.resize(bins);
  }
}

std::size_t MetricsLedger::bin(Seconds created_at) const {
  auto b = static_cast<std::size_t>((created_at - window_.start) / window_.bin_length);
  return std::min(b, per_interval.size() - 1);
}

void MetricsLedger::on_generated(const Packet& p) {
  if (!p.counted) return;
  ++packets_counted;
  if (!per_interval.empty()) ++per_interval[bin(p.created_at)].generated;
}

void MetricsLedger::on_delivered(const Packet& p) {
  if (!p.counted) return;
  Seconds d = p.delay();
  total_delay += d;
  ++packets_delivered;
  if (!per_interval.empty()) {
    auto& agg = per_interval[bin(p.created_at)];
    ++agg.delivered;
    agg.delay += d;
  }
}

void MetricsLedger::censor(const Packet& p, Seconds now) {
  if (!p.counted) return;
  Seconds d = now - p.created_at;
  total_delay += d;
  ++packets_censored;
  if (!per_interval.empty()) per_interval[bin(p.created_at)].delay += d;
}

void DeliveryAccumulator::resize(std::size_t groups) {
  sums_.assign(groups, 0.0);
  counts_.assign(groups, 0);
}

void DeliveryAccumulator::on_delivered(Seconds delay) {
  for (auto& s : sums_) s += delay;
  for (auto& c : counts_) ++c;
}

DeliveryAccumulator::Slice DeliveryAccumulator::take(std::size_t group) {
  Slice s{sums_.at(group), counts_.at(group)};
  sums_[group] = 0.0;
  counts_[group] = 0;
  return s;
}

}  // namespace maskroute::sim
