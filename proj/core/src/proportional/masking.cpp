#include "maskroute/proportional/masking.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace maskroute::proportional {

std::string_view to_string(MaskingMode mode) {
  switch (mode) {
    case MaskingMode::kNone: return "none";
    case MaskingMode::kHard: return "hard";
    case MaskingMode::kSoftExponential: return "soft_exponential";
    case MaskingMode::kSoftPower: return "soft_power";
  }
  return "none";
}

MaskingMode parse_masking_mode(std::string_view text) {
  for (auto m : {MaskingMode::kNone, MaskingMode::kHard, MaskingMode::kSoftExponential,
                 MaskingMode::kSoftPower}) {
    if (to_string(m) == text) return m;
  }
  throw std::invalid_argument("unknown masking mode '" + std::string(text) + "'");
}

void MaskingConfig::validate() const {
  bool soft = mode == MaskingMode::kSoftExponential || mode == MaskingMode::kSoftPower;
  if (soft && !(beta >= 0.0 && std::isfinite(beta))) {
    throw std::invalid_argument("beta must be finite and >= 0");
  }
}

namespace {

void check_lengths(const ProportionVector& p, std::span<const Seconds> v_neighbors) {
  if (p.size() != v_neighbors.size()) {
    throw std::invalid_argument("proportion vector has " + std::to_string(p.size()) +
                                " links but " + std::to_string(v_neighbors.size()) +
                                " ordering values were given");
  }
}

template <typename Weight>
ProportionVector renormalize(const ProportionVector& p, Seconds v_self,
                             std::span<const Seconds> v_neighbors, Weight weight) {
  check_lengths(p, v_neighbors);
  std::vector<double> w(p.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double gap = v_self - v_neighbors[i];
    // Heaviside with H(0) = 0; NaN gaps (unknown ordering) are masked too.
    if (!(gap > 0.0) || p[i] == 0.0) continue;
    w[i] = p[i] * weight(gap);
    total += w[i];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    // exp overflow on enormous gaps: fall back to the largest-gap admissible
    // links, which dominate the limit.
    if (total == std::numeric_limits<double>::infinity()) {
      for (double& x : w) x = (x == std::numeric_limits<double>::infinity()) ? 1.0 : 0.0;
      total = 0.0;
      for (double x : w) total += x;
    } else {
      throw NoAdmissibleLink();
    }
  }
  for (double& x : w) x /= total;
  // Absorb rounding so the sum invariant holds tightly.
  double sum = 0.0;
  for (double x : w) sum += x;
  auto biggest = std::max_element(w.begin(), w.end());
  *biggest = std::clamp(*biggest + (1.0 - sum), 0.0, 1.0);
  return ProportionVector(std::move(w));
}

}  // namespace

ProportionVector hard_mask(const ProportionVector& p, Seconds v_self,
                           std::span<const Seconds> v_neighbors) {
  return renormalize(p, v_self, v_neighbors, [](double) { return 1.0; });
}

ProportionVector soft_mask(const ProportionVector& p, Seconds v_self,
                           std::span<const Seconds> v_neighbors, const MaskingConfig& config) {
  config.validate();
  switch (config.mode) {
    case MaskingMode::kSoftExponential: {
      // Shift by the largest admissible gap so exp never overflows; the common
      // factor cancels in the normalization.
      double max_gap = 0.0;
      for (std::size_t i = 0; i < std::min(p.size(), v_neighbors.size()); ++i) {
        double gap = v_self - v_neighbors[i];
        if (p[i] > 0.0 && gap > 0.0 && std::isfinite(gap)) max_gap = std::max(max_gap, gap);
      }
      const double beta = config.beta;
      return renormalize(p, v_self, v_neighbors,
                         [beta, max_gap](double gap) { return std::exp(beta * (gap - max_gap)); });
    }
    case MaskingMode::kSoftPower: {
      const double beta = config.beta;
      return renormalize(p, v_self, v_neighbors,
                         [beta](double gap) { return std::pow(gap, beta); });
    }
    default:
      throw std::invalid_argument("soft_mask requires a soft masking mode");
  }
}

ProportionVector apply_mask(const ProportionVector& p, Seconds v_self,
                            std::span<const Seconds> v_neighbors, const MaskingConfig& config) {
  switch (config.mode) {
    case MaskingMode::kNone: check_lengths(p, v_neighbors); return p;
    case MaskingMode::kHard: return hard_mask(p, v_self, v_neighbors);
    default: return soft_mask(p, v_self, v_neighbors, config);
  }
}

}  // namespace maskroute::proportional
