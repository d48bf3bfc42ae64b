#pragma once

#include <span>
#include <stdexcept>
#include <string_view>

#include "maskroute/proportional/proportion_vector.hpp"
#include "maskroute/types.hpp"

namespace maskroute::proportional {

enum class MaskingMode { kNone, kHard, kSoftExponential, kSoftPower };

std::string_view to_string(MaskingMode mode);
MaskingMode parse_masking_mode(std::string_view text);

struct MaskingConfig {
  MaskingMode mode = MaskingMode::kSoftExponential;
  /// Shape parameter for the soft modes, in 1/seconds for the exponential
  /// form and dimensionless for the power form.
  double beta = 1.0;

  void validate() const;
};

/// Thrown when masking leaves no link with positive weight.
class NoAdmissibleLink : public std::runtime_error {
 public:
  NoAdmissibleLink() : std::runtime_error("no admissible link") {}
};

/// Zeroes every link toward a neighbor whose ordering value is not strictly
/// below the router's own, then renormalizes. Surviving ratios are unchanged.
ProportionVector hard_mask(const ProportionVector& p, Seconds v_self,
                           std::span<const Seconds> v_neighbors);

/// Continuous attenuation toward the masking boundary. Exponential mode
/// weights link i by exp(beta * (v_self - v_i)); power mode by
/// (v_self - v_i)^beta. Both vanish for v_i >= v_self.
ProportionVector soft_mask(const ProportionVector& p, Seconds v_self,
                           std::span<const Seconds> v_neighbors, const MaskingConfig& config);

/// Dispatches on config.mode; kNone returns `p` unchanged.
ProportionVector apply_mask(const ProportionVector& p, Seconds v_self,
                            std::span<const Seconds> v_neighbors, const MaskingConfig& config);

}  // namespace maskroute::proportional
