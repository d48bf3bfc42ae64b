#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace maskroute::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(key), "invalid value '" + std::string(text) + "' for '" +
                                            std::string(key) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(std::string(key),
                    "invalid value '" + std::string(text) + "' for '" + std::string(key) + "'");
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename Parse>
auto parse_enum(std::string_view key, std::string_view text, Parse parse) {
  try {
    return parse(text);
  } catch (const std::exception&) {
    throw ConfigError(std::string(key),
                      "invalid value '" + std::string(text) + "' for '" + std::string(key) + "'");
  }
}

struct Field {
  std::function<void(RunConfig&, std::string_view, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Field number_field(T RunConfig::*member) {
  return Field{[member](RunConfig& c, std::string_view k, std::string_view v) {
                 c.*member = parse_number<T>(k, v);
               },
               [member](const RunConfig& c) {
                 if constexpr (std::is_floating_point_v<T>) {
                   return format_double(c.*member);
                 } else {
                   return std::to_string(c.*member);
                 }
               }};
}

Field string_field(std::string RunConfig::*member) {
  return Field{[member](RunConfig& c, std::string_view, std::string_view v) { c.*member = v; },
               [member](const RunConfig& c) { return c.*member; }};
}

Field bool_field(bool RunConfig::*member) {
  return Field{[member](RunConfig& c, std::string_view k, std::string_view v) {
                 c.*member = parse_bool(k, v);
               },
               [member](const RunConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"scenario", string_field(&RunConfig::scenario)},
      {"arm", string_field(&RunConfig::arm)},
      {"trials", number_field(&RunConfig::trials)},
      {"seed", number_field(&RunConfig::seed)},
      {"preset",
       Field{[](RunConfig& c, std::string_view k, std::string_view v) {
               c.preset = parse_enum(k, v, parse_preset);
             },
             [](const RunConfig& c) { return std::string(to_string(c.preset)); }}},
      {"masking",
       Field{[](RunConfig& c, std::string_view k, std::string_view v) {
               c.masking = parse_enum(k, v, proportional::parse_masking_mode);
             },
             [](const RunConfig& c) { return std::string(proportional::to_string(c.masking)); }}},
      {"beta", number_field(&RunConfig::beta)},
      {"k", number_field(&RunConfig::k)},
      {"fit",
       Field{[](RunConfig& c, std::string_view k, std::string_view v) {
               c.fit = parse_enum(k, v, learning::parse_fit_method);
             },
             [](const RunConfig& c) { return std::string(learning::to_string(c.fit)); }}},
      {"n_samples", number_field(&RunConfig::n_samples)},
      {"sigma", number_field(&RunConfig::sigma)},
      {"temperature", number_field(&RunConfig::temperature)},
      {"interval", number_field(&RunConfig::interval)},
      {"sweep_step", number_field(&RunConfig::sweep_step)},
      {"link_bandwidth", number_field(&RunConfig::link_bandwidth)},
      {"protocol_period", number_field(&RunConfig::protocol_period)},
      {"ewma_alpha", number_field(&RunConfig::ewma_alpha)},
      {"forward_share", number_field(&RunConfig::forward_share)},
      {"threads", number_field(&RunConfig::threads)},
      {"out", string_field(&RunConfig::out)},
      {"event_trace", bool_field(&RunConfig::event_trace)},
      {"learning_log", bool_field(&RunConfig::learning_log)},
  };
  return table;
}

const Field* find_field(std::string_view key) {
  for (const auto& [name, field] : fields()) {
    if (name == key) return &field;
  }
  return nullptr;
}

void require(bool ok, const char* key, const std::string& what) {
  if (!ok) throw ConfigError(key, std::string("'") + key + "' " + what);
}

learning::StageSchedule preset_schedule(Preset preset) {
  return preset == Preset::kPaper ? learning::StageSchedule::paper()
                                  : learning::StageSchedule::desk();
}

}  // namespace

ConfigError::ConfigError(std::string key, const std::string& message)
    : std::runtime_error(message), key_(std::move(key)) {}

std::string_view to_string(Preset preset) {
  return preset == Preset::kPaper ? "paper" : "desk";
}

Preset parse_preset(std::string_view text) {
  if (text == "paper") return Preset::kPaper;
  if (text == "desk") return Preset::kDesk;
  throw std::invalid_argument("unknown preset '" + std::string(text) + "'");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [name, field] : fields()) out.push_back(name);
    return out;
  }();
  return keys;
}

void set_value(RunConfig& config, std::string_view key, std::string_view value) {
  const Field* field = find_field(key);
  if (!field) throw ConfigError(std::string(key), "unknown key '" + std::string(key) + "'");
  field->set(config, key, value);
}

void validate(const RunConfig& c) {
  require(!c.scenario.empty(), "scenario", "must not be empty");
  if (c.scenario != "gemini") {
    std::error_code ec;
    require(std::filesystem::is_regular_file(c.scenario, ec), "scenario",
            "names no built-in scenario or file: " + c.scenario);
  }
  try {
    experiments::parse_arm(c.arm);
  } catch (const std::exception&) {
    throw ConfigError("arm", "'arm' has unknown value '" + c.arm + "'");
  }
  require(c.trials >= 1, "trials", "must be at least 1");
  require(c.beta >= 0.0, "beta", "must be non-negative");
  require(c.k >= 1, "k", "must be at least 1");
  require(c.n_samples >= 1, "n_samples", "must be at least 1");
  require(c.sigma > 0.0, "sigma", "must be positive");
  require(c.temperature > 0.0, "temperature", "must be positive");
  require(c.interval > 0.0, "interval", "must be positive");
  require(c.sweep_step > 0.0 && c.sweep_step <= 1.0, "sweep_step", "must be in (0, 1]");
  require(std::abs(1.0 / c.sweep_step - std::round(1.0 / c.sweep_step)) < 1e-9, "sweep_step",
          "must divide 1 evenly");
  require(c.link_bandwidth > 0.0, "link_bandwidth", "must be positive");
  require(c.protocol_period > 0.0, "protocol_period", "must be positive");
  require(c.ewma_alpha > 0.0 && c.ewma_alpha <= 1.0, "ewma_alpha", "must be in (0, 1]");
  require(c.forward_share >= 0.0 && c.forward_share <= 1.0, "forward_share",
          "must be in [0, 1]");
  require(c.threads >= 1, "threads", "must be at least 1");
  require(!c.out.empty(), "out", "must not be empty");
  try {
    preset_schedule(c.preset).validate(c.interval);
  } catch (const std::exception& e) {
    throw ConfigError("interval", std::string("'interval' does not fit the preset: ") + e.what());
  }
}

RunConfig parse_config_text(std::string_view text, const std::vector<std::string>& overrides) {
  RunConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line),
                        "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    set_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(o, "override '" + o + "' is not key=value");
    }
    std::string_view view(o);
    set_value(config, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
  }
  validate(config);
  return config;
}

RunConfig parse_config(const std::optional<std::filesystem::path>& file,
                       const std::vector<std::string>& overrides) {
  std::string text;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw ConfigError("config", "cannot read config file " + file->string());
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  return parse_config_text(text, overrides);
}

std::string serialize(const RunConfig& config) {
  std::string out;
  for (const auto& [name, field] : fields()) {
    out += name;
    out += " = ";
    out += field.get(config);
    out += '\n';
  }
  return out;
}

experiments::Scenario make_scenario(const RunConfig& config) {
  experiments::Scenario s;
  if (config.scenario == "gemini") {
    experiments::GeminiOptions g;
    g.link_bandwidth_bps = config.link_bandwidth;
    s = experiments::build_gemini(g);
  } else {
    s = experiments::load_scenario_file(config.scenario);
  }
  s.masking = proportional::MaskingConfig{config.masking, config.beta};
  s.learner.k = config.k;
  s.learner.fit = config.fit;
  s.learner.n_samples = config.n_samples;
  s.learner.sigma = config.sigma;
  s.learner.temperature = config.temperature;
  s.learner.sweep_step = config.sweep_step;
  s.schedule = preset_schedule(config.preset);
  s.interaction.interval_length = config.interval;
  s.protocol.period = config.protocol_period;
  s.protocol.ewma_alpha = config.ewma_alpha;
  s.forward_share = config.forward_share;
  s.base_seed = config.seed;
  s.validate();
  return s;
}

}  // namespace maskroute::cli
