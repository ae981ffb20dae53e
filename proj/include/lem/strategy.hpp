#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace lem {

// The implementation matrix: Braun-Willett depth-first stack order vs
// breadth-first level-set queue order, each serial or with parallel phases.
enum class StrategyKind {
  kBwSerial,         // stack order, everything serial
  kRbSerial,         // queue order, everything serial
  kBwParErosion,     // stack order, erosion parallel over source trees
  kRbParErosion,     // queue order, erosion parallel within levels
  kRbParAll,         // queue order, all phases parallel (per-level barriers)
  kRbPrivateQueues,  // per-worker private queues over disjoint source forests
};

inline constexpr std::array<StrategyKind, 6> kAllStrategies = {
    StrategyKind::kBwSerial,      StrategyKind::kRbSerial,
    StrategyKind::kBwParErosion,  StrategyKind::kRbParErosion,
    StrategyKind::kRbParAll,      StrategyKind::kRbPrivateQueues,
};

struct Strategy {
  StrategyKind kind = StrategyKind::kRbSerial;
  std::uint32_t workers = 1;  // ignored by the serial kinds
};

constexpr bool is_serial(StrategyKind k) {
  return k == StrategyKind::kBwSerial || k == StrategyKind::kRbSerial;
}

constexpr bool uses_stack_order(StrategyKind k) {
  return k == StrategyKind::kBwSerial || k == StrategyKind::kBwParErosion;
}

constexpr std::string_view to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::kBwSerial: return "bw_serial";
    case StrategyKind::kRbSerial: return "rb_serial";
    case StrategyKind::kBwParErosion: return "bw_par_erosion";
    case StrategyKind::kRbParErosion: return "rb_par_erosion";
    case StrategyKind::kRbParAll: return "rb_par_all";
    case StrategyKind::kRbPrivateQueues: return "rb_private_queues";
  }
  return "?";
}

constexpr std::optional<StrategyKind> strategy_from_string(std::string_view s) {
  for (StrategyKind k : kAllStrategies)
    if (s == to_string(k)) return k;
  return std::nullopt;
}

}  // namespace lem
