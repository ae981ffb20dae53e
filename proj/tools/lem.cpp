// lem: stream-power landscape evolution on rasters.
//
//   lem run     [key=value ...]   simulate and write the final raster
//   lem compare [key=value ...]   run several strategies, diff the outputs
//   lem bench   [key=value ...]   per-phase timings as tab-separated rows
//
// Flags mirror the config-file keys (see `lem help`); `config=FILE` loads a
// key=value file first, then the remaining flags override it.
// Exit codes: 0 success/match, 1 usage or bad config, 2 runtime error,
// 3 comparison mismatch.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <lem/config.hpp>
#include <lem/depressions.hpp>
#include <lem/error.hpp>
#include <lem/raster_io.hpp>
#include <lem/scheduler.hpp>
#include <lem/terrain.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitMismatch = 3;

void print_usage(std::FILE* to) {
  std::fputs(
      "usage: lem <run|compare|bench> [key=value ...]\n"
      "\n"
      "  run      simulate `timesteps` steps, write the final raster to `output`\n"
      "  compare  run the strategies in `strategies=` (default: all six) on the\n"
      "           same seeded terrain and verify the outputs are byte-identical\n"
      "  bench    time every phase for each strategy in `strategies=` at each\n"
      "           square grid size in `sizes=`; emits TSV on stdout\n"
      "\n"
      "config keys (also valid as flags, with or without leading --):\n",
      to);
  for (const auto& [key, help] : lem::config_key_help())
    std::fprintf(to, "  %-18.*s %.*s\n", static_cast<int>(key.size()), key.data(),
                 static_cast<int>(help.size()), help.data());
  std::fputs(
      "\ncommand-specific keys:\n"
      "  config=FILE         load key=value lines from FILE before other flags\n"
      "  strategies=a,b,...  compare/bench: strategy list\n"
      "  sizes=100,200,...   bench: square grid edge lengths\n",
      to);
}

struct CliArgs {
  std::vector<lem::KeyValue> file_entries;
  std::vector<lem::KeyValue> flag_entries;
  std::vector<lem::StrategyKind> strategies;  // compare/bench
  std::vector<std::uint32_t> sizes;           // bench
  bool strategies_given = false;
};

std::vector<std::string> split_commas(std::string_view s) {
  std::vector<std::string> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    out.emplace_back(s.substr(0, comma));
    s.remove_prefix(comma == std::string_view::npos ? s.size() : comma + 1);
  }
  return out;
}

CliArgs parse_cli(int argc, char** argv) {
  CliArgs args;
  for (int i = 2; i < argc; ++i) {
    std::string_view arg = argv[i];
    if (arg.rfind("--", 0) == 0) arg.remove_prefix(2);
    const auto eq = arg.find('=');
    if (eq == std::string_view::npos)
      throw lem::ConfigError("expected key=value, got '" + std::string(arg) + "'");
    const std::string key(arg.substr(0, eq));
    const std::string value(arg.substr(eq + 1));

    if (key == "config") {
      const auto entries = lem::parse_kv_file(value);
      args.file_entries.insert(args.file_entries.end(), entries.begin(), entries.end());
    } else if (key == "strategies") {
      args.strategies_given = true;
      args.strategies.clear();
      for (const std::string& name : split_commas(value)) {
        const auto kind = lem::strategy_from_string(name);
        if (!kind) throw lem::ConfigError("unknown strategy '" + name + "'");
        args.strategies.push_back(*kind);
      }
    } else if (key == "sizes") {
      args.sizes.clear();
      for (const std::string& tok : split_commas(value)) {
        try {
          const unsigned long v = std::stoul(tok);
          args.sizes.push_back(static_cast<std::uint32_t>(v));
        } catch (const std::exception&) {
          throw lem::ConfigError("config key 'sizes': cannot parse '" + tok + "' as an integer");
        }
      }
    } else {
      args.flag_entries.emplace_back(key, value);
    }
  }
  if (!args.strategies_given)
    args.strategies.assign(lem::kAllStrategies.begin(), lem::kAllStrategies.end());
  return args;
}

std::string snapshot_path(const std::string& output, std::uint32_t step) {
  std::string base = output;
  if (base.size() > 4 && base.compare(base.size() - 4, 4, ".lem") == 0)
    base.resize(base.size() - 4);
  char suffix[16];
  std::snprintf(suffix, sizeof suffix, ".%06u.lem", step);
  return base + suffix;
}

void print_phase_table(const lem::PhaseTimings& t, std::FILE* to) {
  const double total = t.total();
  std::fprintf(to, "  %-10s %10s %7s\n", "phase", "seconds", "share");
  for (int p = 0; p < lem::kNumPhases; ++p) {
    const double s = t.seconds[p];
    std::fprintf(to, "  %-10.*s %10.3f %6.1f%%\n",
                 static_cast<int>(lem::kPhaseNames[p].size()), lem::kPhaseNames[p].data(), s,
                 total > 0 ? 100.0 * s / total : 0.0);
  }
}

lem::Raster<double> make_initial(const lem::RunConfig& cfg) {
  lem::Raster<double> terrain = lem::generate_terrain(cfg.width, cfg.height, cfg.seed);
  if (cfg.fill.mode != lem::FillMode::kOff)
    terrain = lem::priority_flood_fill(terrain, cfg.fill);
  return terrain;
}

int cmd_run(const lem::RunConfig& cfg) {
  const auto on_step = [&cfg](std::uint32_t step, const lem::Raster<double>& elev,
                              const lem::StepDiagnostics&) {
    if (cfg.snapshot_interval && step % cfg.snapshot_interval == 0)
      lem::write_raster(elev, snapshot_path(cfg.output, step));
  };
  const lem::RunResult res = lem::run_simulation(cfg, on_step);
  lem::write_raster(res.elevation, cfg.output);

  std::printf("ran %u steps (%.*s, workers %u) on %ux%u in %.3f s\n", cfg.timesteps,
              static_cast<int>(lem::to_string(cfg.strategy.kind).size()),
              lem::to_string(cfg.strategy.kind).data(), cfg.strategy.workers, cfg.width,
              cfg.height, res.phase_totals.total());
  print_phase_table(res.phase_totals, stdout);
  std::printf("  newton iterations: %llu\n",
              static_cast<unsigned long long>(res.newton_iters));
  if (cfg.timesteps > 0)
    std::printf("  interior pits at last step: %u\n", res.interior_noflow_last);
  if (!res.worker_cells.empty()) {
    std::printf("  worker cells:");
    for (std::uint64_t n : res.worker_cells)
      std::printf(" %llu", static_cast<unsigned long long>(n));
    std::printf("\n");
  }
  std::printf("wrote %s\n", cfg.output.c_str());
  return kExitOk;
}

int cmd_compare(const lem::RunConfig& cfg, const std::vector<lem::StrategyKind>& strategies) {
  if (strategies.size() < 2)
    throw lem::ConfigError("compare needs at least two strategies");

  const lem::Raster<double> terrain = make_initial(cfg);

  std::optional<lem::Raster<double>> reference;
  lem::StrategyKind ref_kind{};
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    lem::RunConfig run_cfg = cfg;
    run_cfg.strategy.kind = strategies[i];

    lem::Raster<double> initial = terrain;
    if (i == 0 && cfg.debug_perturb_cell != lem::kNoFlow) {
      if (cfg.debug_perturb_cell >= initial.size())
        throw lem::ConfigError("debug_perturb_cell is outside the grid");
      initial[cfg.debug_perturb_cell] += cfg.debug_perturb_amount;
    }

    lem::RunResult res = lem::run_simulation(std::move(initial), run_cfg);
    if (!reference) {
      reference = std::move(res.elevation);
      ref_kind = strategies[i];
      continue;
    }
    const auto diff = lem::first_difference(*reference, res.elevation);
    if (diff) {
      const lem::CellIndex c = *diff;
      std::fprintf(stderr,
                   "mismatch: %.*s and %.*s first differ at cell %u (x=%d, y=%d): "
                   "%.17g vs %.17g\n",
                   static_cast<int>(lem::to_string(ref_kind).size()),
                   lem::to_string(ref_kind).data(),
                   static_cast<int>(lem::to_string(strategies[i]).size()),
                   lem::to_string(strategies[i]).data(), c, reference->x_of(c),
                   reference->y_of(c), (*reference)[c], res.elevation[c]);
      return kExitMismatch;
    }
  }
  std::printf("%zu strategies produced byte-identical rasters (%ux%u, %u steps, workers %u)\n",
              strategies.size(), cfg.width, cfg.height, cfg.timesteps, cfg.strategy.workers);
  return kExitOk;
}

int cmd_bench(const lem::RunConfig& cfg, const std::vector<lem::StrategyKind>& strategies,
              std::vector<std::uint32_t> sizes) {
  if (sizes.empty()) sizes = {cfg.width};

  // Stable schema: one row per (strategy, size, phase).
  std::printf("strategy\tsize\tphase\tseconds\tshare\n");
  for (const std::uint32_t size : sizes) {
    for (const lem::StrategyKind kind : strategies) {
      lem::RunConfig run_cfg = cfg;
      run_cfg.width = size;
      run_cfg.height = size;
      run_cfg.strategy.kind = kind;
      run_cfg.validate();

      const lem::RunResult res = lem::run_simulation(run_cfg);
      const double total = res.phase_totals.total();
      for (int p = 0; p < lem::kNumPhases; ++p) {
        const double s = res.phase_totals.seconds[p];
        std::printf("%.*s\t%u\t%.*s\t%.6f\t%.4f\n",
                    static_cast<int>(lem::to_string(kind).size()), lem::to_string(kind).data(),
                    size, static_cast<int>(lem::kPhaseNames[p].size()),
                    lem::kPhaseNames[p].data(), s, total > 0 ? s / total : 0.0);
      }
      std::fprintf(stderr, "# %.*s %ux%u: %u steps in %.3f s",
                   static_cast<int>(lem::to_string(kind).size()), lem::to_string(kind).data(),
                   size, size, run_cfg.timesteps, total);
      if (!res.worker_cells.empty()) {
        std::fprintf(stderr, ", worker cells");
        for (std::uint64_t n : res.worker_cells)
          std::fprintf(stderr, " %llu", static_cast<unsigned long long>(n));
      }
      std::fprintf(stderr, "\n");
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    print_usage(stderr);
    return kExitUsage;
  }
  const std::string_view cmd = argv[1];
  if (cmd == "help" || cmd == "--help" || cmd == "-h") {
    print_usage(stdout);
    return kExitOk;
  }

  try {
    const CliArgs args = parse_cli(argc, argv);
    const lem::RunConfig cfg = lem::parse_config(args.file_entries, args.flag_entries);

    if (cmd == "run") return cmd_run(cfg);
    if (cmd == "compare") return cmd_compare(cfg, args.strategies);
    if (cmd == "bench") return cmd_bench(cfg, args.strategies, args.sizes);

    std::fprintf(stderr, "unknown command '%.*s'\n\n", static_cast<int>(cmd.size()), cmd.data());
    print_usage(stderr);
    return kExitUsage;
  } catch (const lem::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}
