#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "maskroute/sim/random.hpp"

namespace maskroute::learning {

enum class FitMethod { kMean, kLinearLeastSquares };

std::string_view to_string(FitMethod fit);
FitMethod parse_fit_method(std::string_view text);

struct LearnerConfig {
  std::size_t k = 12;
  FitMethod fit = FitMethod::kLinearLeastSquares;
  std::size_t n_samples = 5;
  double sigma = 0.0025;
  /// In reward units (seconds of summed delay).
  double temperature = 3000.0;
  double sweep_step = 0.05;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Features are the agent's own action first, then any observed peer actions.
struct TrainingExample {
  std::vector<double> features;
  double reward = 0.0;
  std::int64_t interval_index = 0;
};

using Dataset = std::vector<TrainingExample>;

class NoData : public std::runtime_error {
 public:
  NoData() : std::runtime_error("no data: training set is empty") {}
};

/// Grid {0, step, 2*step, ..., 1}. `step` must divide 1.
std::vector<double> action_grid(double step);

/// Grid value at position (stride * interval_index) mod grid size.
double training_action(std::size_t stride, std::size_t interval_index, double step = 0.05);

/// Indices of the k examples closest to `query` in Euclidean distance,
/// nearest first, dataset order on ties. Fewer than k when the dataset is small.
std::vector<std::size_t> nearest_neighbors(const Dataset& data, std::span<const double> query,
                                           std::size_t k);

/// Memory-based estimate of the reward at `query` from its k nearest
/// neighbors: their mean, or a least-squares hyperplane through them
/// (mean when the fit is rank deficient).
double estimate_reward(const Dataset& data, std::span<const double> query,
                       const LearnerConfig& config);

/// Probabilities proportional to exp(estimate / temperature).
std::vector<double> boltzmann_probabilities(std::span<const double> estimates,
                                            double temperature);

struct Decision {
  double action = 0.0;
  double estimate = 0.0;
};

/// Best grid action given fixed peer features (ties go to the lower action).
Decision post_training_selection(const Dataset& data, std::span<const double> peer_features,
                                 const LearnerConfig& config);

/// Gaussian exploration around `previous_action` (samples clamped to [0,1]),
/// then Boltzmann selection over the candidates' estimates. `previous`, if
/// given, is appended to `data` first.
Decision learning_step(Dataset& data, std::optional<TrainingExample> previous,
                       double previous_action, std::span<const double> peer_features,
                       const LearnerConfig& config, sim::RandomStream& exploration,
                       sim::RandomStream& selection);

/// Reward for an interval: negative summed delay of packets delivered in it.
inline double interval_reward(double summed_delay) { return -summed_delay; }

}  // namespace maskroute::learning
