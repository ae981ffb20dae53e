#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <lem/depressions.hpp>
#include <lem/erosion.hpp>
#include <lem/raster.hpp>
#include <lem/strategy.hpp>

namespace lem {

enum class Routing {
  kD8,   // steepest-descent accumulation (the default pipeline)
  kMfd,  // slope-weighted multiple-flow accumulation; erosion still follows
         // the D8 receiver (no MFD erosion equation exists here)
};

struct RunConfig {
  std::uint32_t width = 500;
  std::uint32_t height = 500;
  std::uint64_t seed = 42;
  std::uint32_t timesteps = 120;
  Strategy strategy{};
  SimParams params{};
  FillOptions fill{};
  int connectivity = 8;
  Routing routing = Routing::kD8;
  double mfd_exponent = 1.0;
  std::string output = "out.lem";
  std::uint32_t snapshot_interval = 0;  // 0 disables periodic snapshots

  // Test hook for the compare harness: before stepping, add
  // debug_perturb_amount to this cell of the *first* strategy's input so a
  // mismatch is guaranteed and must be reported at exactly this cell.
  CellIndex debug_perturb_cell = kNoFlow;
  double debug_perturb_amount = 0.0;

  void validate() const;  // throws ConfigError on any out-of-range field
};

using KeyValue = std::pair<std::string, std::string>;

/// Line-oriented `key=value` text: one pair per line, `#` starts a comment,
/// blank lines ignored, whitespace around key and value trimmed. Throws
/// ConfigError on a line with no '='.
std::vector<KeyValue> parse_kv_text(std::string_view text);

/// Same grammar, read from a file.
std::vector<KeyValue> parse_kv_file(const std::string& path);

/// Applies entries onto `cfg` in order (later wins). Unknown keys, malformed
/// values, and range violations throw ConfigError naming the key. Does not
/// run validate(); callers do that once all sources are applied.
void apply_config(RunConfig& cfg, const std::vector<KeyValue>& entries);

/// Defaults <- file entries <- flag entries, then validate().
RunConfig parse_config(const std::vector<KeyValue>& file_entries,
                       const std::vector<KeyValue>& flag_entries);

/// Documented keys in display order, with one-line help strings.
const std::vector<std::pair<std::string_view, std::string_view>>& config_key_help();

}  // namespace lem
