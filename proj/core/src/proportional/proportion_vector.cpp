#include "maskroute/proportional/proportion_vector.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace maskroute::proportional {

ProportionVector::ProportionVector(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidProportions("proportion vector must have at least one link");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw InvalidProportions("proportion " + std::to_string(w) + " outside [0,1]");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw InvalidProportions("proportions sum to " + std::to_string(sum) + ", not 1");
  }
}

ProportionVector ProportionVector::binary(double a, std::size_t primary) {
  if (primary > 1) throw InvalidProportions("binary primary slot must be 0 or 1");
  std::vector<double> w(2);
  w[primary] = a;
  w[1 - primary] = 1.0 - a;
  return ProportionVector(std::move(w));
}

ProportionVector ProportionVector::uniform(std::size_t m) {
  if (m == 0) throw InvalidProportions("proportion vector must have at least one link");
  return ProportionVector(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

ProportionVector ProportionVector::point(std::size_t m, std::size_t slot) {
  if (slot >= m) throw InvalidProportions("slot out of range");
  std::vector<double> w(m, 0.0);
  w[slot] = 1.0;
  return ProportionVector(std::move(w));
}

double ProportionVector::distance(const ProportionVector& other) const {
  if (other.size() != size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < size(); ++i) d = std::max(d, std::abs(weights_[i] - other[i]));
  return d;
}

}  // namespace maskroute::proportional
