#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>

namespace ska {

inline constexpr const char* kToolVersion = "0.1.0";

// Knobs shared by every entry point. All search/enumeration budgets are hard
// errors when exceeded, never silent truncation.
struct RunConfig {
  enum class Format { human, machine };

  std::uint64_t seed = 0;
  int workers = 0;  // 0 = one per hardware thread
  int partition_cap = 12;
  int subspace_dim_cap = 6;
  std::uint64_t enum_cap = std::uint64_t{1} << 26;       // realizations per scan
  std::uint64_t candidate_cap = std::uint64_t{1} << 30;  // oracle scheme search
  bool skip_rs = false;
  Format format = Format::human;

  int resolved_workers() const {
    if (workers > 0) return std::min(workers, 64);
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 64u));
  }
};

}  // namespace ska
