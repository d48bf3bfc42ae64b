#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace maskroute::proportional {

inline constexpr double kSumTolerance = 1e-9;

class InvalidProportions : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fractions of traffic per outbound link: each in [0,1], summing to 1.
class ProportionVector {
 public:
  explicit ProportionVector(std::vector<double> weights);
  ProportionVector(std::initializer_list<double> weights)
      : ProportionVector(std::vector<double>(weights)) {}

  /// (a, 1-a) with `a` on slot `primary` of a two-link router.
  static ProportionVector binary(double a, std::size_t primary = 0);
  static ProportionVector uniform(std::size_t m);
  /// Unit mass on `slot`.
  static ProportionVector point(std::size_t m, std::size_t slot);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }

  /// Largest absolute componentwise difference; +inf when sizes differ.
  double distance(const ProportionVector& other) const;

 private:
  std::vector<double> weights_;
};

}  // namespace maskroute::proportional
