#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "maskroute/experiments/runner.hpp"
#include "maskroute/experiments/scenario.hpp"
#include "maskroute/learning/memory_learner.hpp"
#include "maskroute/proportional/masking.hpp"

namespace maskroute::cli {

/// A bad key or value. key() names the offending setting.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message);
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class Preset { kPaper, kDesk };

std::string_view to_string(Preset preset);
Preset parse_preset(std::string_view text);

struct RunConfig {
  /// "gemini" or a path to a scenario file.
  std::string scenario = "gemini";
  std::string arm = "std_mbl";
  std::size_t trials = 40;
  std::uint64_t seed = 1;
  Preset preset = Preset::kPaper;
  proportional::MaskingMode masking = proportional::MaskingMode::kSoftExponential;
  double beta = 1.0;
  std::size_t k = 12;
  learning::FitMethod fit = learning::FitMethod::kLinearLeastSquares;
  std::size_t n_samples = 5;
  double sigma = 0.0025;
  double temperature = 3000.0;
  double interval = 500.0;
  double sweep_step = 0.05;
  /// Bandwidth of every Gemini link. Ignored for scenario files.
  double link_bandwidth = 3500.0;
  double protocol_period = 1.0;
  double ewma_alpha = 0.1;
  double forward_share = 0.9;
  std::size_t threads = 1;
  std::string out = "results";
  bool event_trace = false;
  bool learning_log = false;

  bool operator==(const RunConfig&) const = default;
};

/// Every key accepted in a config file, in serialization order.
const std::vector<std::string>& config_keys();

/// Sets one key from its text form. Throws ConfigError for unknown keys and
/// unparsable values.
void set_value(RunConfig& config, std::string_view key, std::string_view value);

/// Range checks; throws ConfigError naming the first bad key.
void validate(const RunConfig& config);

/// Flat `key = value` text with `#` comments.
RunConfig parse_config_text(std::string_view text, const std::vector<std::string>& overrides = {});

/// Reads `file` (if given), then applies `overrides` ("key=value") in order
/// and validates the result.
RunConfig parse_config(const std::optional<std::filesystem::path>& file,
                       const std::vector<std::string>& overrides = {});

/// Text that parse_config_text turns back into an equal config.
std::string serialize(const RunConfig& config);

/// Scenario described by `config`, with learner, masking, schedule and
/// protocol overrides applied.
experiments::Scenario make_scenario(const RunConfig& config);

}  // namespace maskroute::cli
