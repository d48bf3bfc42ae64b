#include "maskroute/learning/memory_learner.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace maskroute::learning {

std::string_view to_string(FitMethod fit) {
  return fit == FitMethod::kMean ? "mean" : "linear_least_squares";
}

FitMethod parse_fit_method(std::string_view text) {
  if (text == "mean") return FitMethod::kMean;
  if (text == "linear_least_squares" || text == "linear") return FitMethod::kLinearLeastSquares;
  throw std::invalid_argument("unknown fit method '" + std::string(text) + "'");
}

void LearnerConfig::validate() const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be > 0");
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
  if (!(sweep_step > 0.0 && sweep_step <= 1.0)) {
    throw std::invalid_argument("sweep_step must be in (0, 1]");
  }
  double n = 1.0 / sweep_step;
  if (std::abs(n - std::round(n)) > 1e-9) {
    throw std::invalid_argument("sweep_step must divide 1 evenly");
  }
}

std::vector<double> action_grid(double step) {
  double n = 1.0 / step;
  if (!(step > 0.0) || std::abs(n - std::round(n)) > 1e-9) {
    throw std::invalid_argument("grid step must divide 1 evenly");
  }
  auto count = static_cast<std::size_t>(std::llround(n));
  std::vector<double> grid(count + 1);
  for (std::size_t i = 0; i <= count; ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(count);
  }
  return grid;
}

double training_action(std::size_t stride, std::size_t interval_index, double step) {
  auto grid = action_grid(step);
  return grid[(stride * interval_index) % grid.size()];
}

std::vector<std::size_t> nearest_neighbors(const Dataset& data, std::span<const double> query,
                                           std::size_t k) {
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& f = data[i].features;
    if (f.size() != query.size()) {
      throw std::invalid_argument("feature dimension mismatch in nearest_neighbors");
    }
    double d2 = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) d2 += (f[j] - query[j]) * (f[j] - query[j]);
    dist.emplace_back(d2, i);
  }
  std::size_t take = std::min(k, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(take), dist.end());
  std::vector<std::size_t> out(take);
  for (std::size_t i = 0; i < take; ++i) out[i] = dist[i].second;
  return out;
}

double estimate_reward(const Dataset& data, std::span<const double> query,
                       const LearnerConfig& config) {
  if (data.empty()) throw NoData();
  auto idx = nearest_neighbors(data, query, config.k);
  double mean = 0.0;
  for (auto i : idx) mean += data[i].reward;
  mean /= static_cast<double>(idx.size());
  if (config.fit == FitMethod::kMean) return mean;

  const auto dims = static_cast<Eigen::Index>(query.size());
  const auto rows = static_cast<Eigen::Index>(idx.size());
  if (rows < dims + 1) return mean;
  Eigen::MatrixXd x(rows, dims + 1);
  Eigen::VectorXd y(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& ex = data[idx[static_cast<std::size_t>(r)]];
    x(r, 0) = 1.0;
    for (Eigen::Index c = 0; c < dims; ++c) x(r, c + 1) = ex.features[static_cast<std::size_t>(c)];
    y(r) = ex.reward;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < dims + 1) return mean;
  Eigen::VectorXd coef = qr.solve(y);
  double est = coef(0);
  for (Eigen::Index c = 0; c < dims; ++c) est += coef(c + 1) * query[static_cast<std::size_t>(c)];
  return est;
}

std::vector<double> boltzmann_probabilities(std::span<const double> estimates,
                                            double temperature) {
  if (estimates.empty()) throw std::invalid_argument("no candidates");
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
  double top = *std::max_element(estimates.begin(), estimates.end());
  std::vector<double> p(estimates.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp((estimates[i] - top) / temperature);
    total += p[i];
  }
  for (double& x : p) x /= total;
  return p;
}

namespace {

std::vector<double> make_query(double action, std::span<const double> peers) {
  std::vector<double> q;
  q.reserve(peers.size() + 1);
  q.push_back(action);
  q.insert(q.end(), peers.begin(), peers.end());
  return q;
}

}  // namespace

Decision post_training_selection(const Dataset& data, std::span<const double> peer_features,
                                 const LearnerConfig& config) {
  Decision best{0.0, -std::numeric_limits<double>::infinity()};
  bool first = true;
  for (double a : action_grid(config.sweep_step)) {
    auto q = make_query(a, peer_features);
    double est = estimate_reward(data, q, config);
    if (first || est > best.estimate) {
      best = {a, est};
      first = false;
    }
  }
  return best;
}

Decision learning_step(Dataset& data, std::optional<TrainingExample> previous,
                       double previous_action, std::span<const double> peer_features,
                       const LearnerConfig& config, sim::RandomStream& exploration,
                       sim::RandomStream& selection) {
  if (previous) data.push_back(std::move(*previous));
  std::normal_distribution<double> gauss(previous_action, config.sigma);
  std::vector<double> candidates(config.n_samples);
  std::vector<double> estimates(config.n_samples);
  for (std::size_t i = 0; i < config.n_samples; ++i) {
    candidates[i] = std::clamp(gauss(exploration), 0.0, 1.0);
  }
  for (std::size_t i = 0; i < config.n_samples; ++i) {
    auto q = make_query(candidates[i], peer_features);
    estimates[i] = estimate_reward(data, q, config);
  }
  auto probs = boltzmann_probabilities(estimates, config.temperature);
  std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
  std::size_t chosen = pick(selection);
  return {candidates[chosen], estimates[chosen]};
}

}  // namespace maskroute::learning
