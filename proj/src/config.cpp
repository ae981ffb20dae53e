#include <lem/config.hpp>

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include <lem/error.hpp>
#include <lem/neighborhood.hpp>

namespace lem {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(const std::string& key, std::string_view value, const char* want) {
  throw ConfigError("config key '" + key + "': cannot parse '" + std::string(value) + "' as " +
                    want);
}

template <typename T>
T parse_int(const std::string& key, std::string_view v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

std::uint64_t parse_seed(const std::string& key, std::string_view v) {
  if (!v.empty() && v.front() == '-')  // negative seeds wrap, same entropy
    return static_cast<std::uint64_t>(parse_int<std::int64_t>(key, v));
  return parse_int<std::uint64_t>(key, v);
}

double parse_double(const std::string& key, std::string_view v) {
  double out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "a number");
  return out;
}

}  // namespace

std::vector<KeyValue> parse_kv_text(std::string_view text) {
  std::vector<KeyValue> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;

    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value, got '" +
                        std::string(line) + "'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    out.emplace_back(std::string(key), std::string(value));
  }
  return out;
}

std::vector<KeyValue> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_kv_text(ss.str());
}

void apply_config(RunConfig& cfg, const std::vector<KeyValue>& entries) {
  for (const auto& [key, value] : entries) {
    if (key == "width") {
      cfg.width = parse_int<std::uint32_t>(key, value);
    } else if (key == "height") {
      cfg.height = parse_int<std::uint32_t>(key, value);
    } else if (key == "seed") {
      cfg.seed = parse_seed(key, value);
    } else if (key == "timesteps") {
      cfg.timesteps = parse_int<std::uint32_t>(key, value);
    } else if (key == "strategy") {
      const auto k = strategy_from_string(value);
      if (!k) bad_value(key, value, "a strategy name");
      cfg.strategy.kind = *k;
    } else if (key == "workers") {
      cfg.strategy.workers = parse_int<std::uint32_t>(key, value);
    } else if (key == "K") {
      cfg.params.K = parse_double(key, value);
    } else if (key == "m_exp") {
      cfg.params.m_exp = parse_double(key, value);
    } else if (key == "n_exp") {
      cfg.params.n_exp = parse_double(key, value);
    } else if (key == "uplift_rate") {
      cfg.params.uplift_rate = parse_double(key, value);
    } else if (key == "dt") {
      cfg.params.dt = parse_double(key, value);
    } else if (key == "epsilon") {
      cfg.params.epsilon = parse_double(key, value);
    } else if (key == "dx") {
      cfg.params.dx = parse_double(key, value);
    } else if (key == "dy") {
      cfg.params.dy = parse_double(key, value);
    } else if (key == "max_newton_iters") {
      cfg.params.max_newton_iters = parse_int<int>(key, value);
    } else if (key == "fill") {
      if (value == "off") cfg.fill.mode = FillMode::kOff;
      else if (value == "exact") cfg.fill.mode = FillMode::kExact;
      else if (value == "epsilon_ascending") cfg.fill.mode = FillMode::kEpsilonAscending;
      else bad_value(key, value, "one of off|exact|epsilon_ascending");
    } else if (key == "fill_epsilon") {
      cfg.fill.epsilon_increment = parse_double(key, value);
    } else if (key == "connectivity") {
      cfg.connectivity = parse_int<int>(key, value);
    } else if (key == "routing") {
      if (value == "d8") cfg.routing = Routing::kD8;
      else if (value == "mfd") cfg.routing = Routing::kMfd;
      else bad_value(key, value, "one of d8|mfd");
    } else if (key == "mfd_exponent") {
      cfg.mfd_exponent = parse_double(key, value);
    } else if (key == "output") {
      cfg.output = value;
    } else if (key == "snapshot_interval") {
      cfg.snapshot_interval = parse_int<std::uint32_t>(key, value);
    } else if (key == "debug_perturb_cell") {
      cfg.debug_perturb_cell = parse_int<CellIndex>(key, value);
    } else if (key == "debug_perturb_amount") {
      cfg.debug_perturb_amount = parse_double(key, value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

RunConfig parse_config(const std::vector<KeyValue>& file_entries,
                       const std::vector<KeyValue>& flag_entries) {
  RunConfig cfg;
  apply_config(cfg, file_entries);
  apply_config(cfg, flag_entries);  // flags win
  cfg.validate();
  return cfg;
}

void RunConfig::validate() const {
  if (width < 3 || height < 3)
    throw ConfigError("width and height must be >= 3 (got " + std::to_string(width) + "x" +
                      std::to_string(height) + ")");
  const std::uint64_t cells = std::uint64_t{width} * height;
  if (cells > std::numeric_limits<CellIndex>::max())
    throw ConfigError("grid of " + std::to_string(cells) + " cells exceeds the 32-bit cell index");
  if (strategy.workers < 1) throw ConfigError("workers must be >= 1");
  params.validate();
  if (fill.mode == FillMode::kEpsilonAscending && !(fill.epsilon_increment > 0.0))
    throw ConfigError("fill_epsilon must be > 0 for epsilon_ascending fill");
  if (!(mfd_exponent > 0.0)) throw ConfigError("mfd_exponent must be > 0");
  if (routing == Routing::kMfd && strategy.kind == StrategyKind::kRbPrivateQueues)
    throw ConfigError(
        "rb_private_queues requires single-receiver (d8) routing: MFD upstream regions can span "
        "worker partitions");
  if (output.empty()) throw ConfigError("output path must not be empty");
  Neighborhood::make(connectivity, params.dx, params.dy);  // rejects 6, etc.
}

const std::vector<std::pair<std::string_view, std::string_view>>& config_key_help() {
  static const std::vector<std::pair<std::string_view, std::string_view>> help = {
      {"width", "grid width in cells (>= 3, default 500)"},
      {"height", "grid height in cells (>= 3, default 500)"},
      {"seed", "terrain seed, 64-bit integer (default 42)"},
      {"timesteps", "number of simulation steps (default 120)"},
      {"strategy",
       "bw_serial | rb_serial | bw_par_erosion | rb_par_erosion | rb_par_all | rb_private_queues"},
      {"workers", "worker threads for parallel strategies (default 1)"},
      {"K", "erodibility constant (default 2e-6)"},
      {"m_exp", "drainage-area exponent m (default 0.5)"},
      {"n_exp", "slope exponent n (default 1)"},
      {"uplift_rate", "uplift rate u (default 2e-3)"},
      {"dt", "timestep length (default 1000)"},
      {"epsilon", "Newton stopping tolerance (default 1e-6)"},
      {"dx", "cell spacing in x (default 1)"},
      {"dy", "cell spacing in y (default 1)"},
      {"max_newton_iters", "Newton iteration cap before error (default 100)"},
      {"fill", "depression handling: off | exact | epsilon_ascending (default off)"},
      {"fill_epsilon", "increment for epsilon_ascending fill (default 1e-8)"},
      {"connectivity", "grid connectivity: 4 or 8 (default 8)"},
      {"routing", "accumulation routing: d8 | mfd (default d8)"},
      {"mfd_exponent", "slope exponent for MFD weights (default 1)"},
      {"output", "output raster path (default out.lem)"},
      {"snapshot_interval", "write <output>.<step>.lem every N steps; 0 = off (default 0)"},
  };
  return help;
}

}  // namespace lem
