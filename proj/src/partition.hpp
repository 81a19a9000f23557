#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace ska {

// Partition of users {0..m-1} into at least two non-empty blocks. The
// restricted-growth string both drives enumeration and serves as the
// canonical tie-breaking order.
struct Partition {
  std::vector<std::uint8_t> rgs;       // rgs[i] = block index of user i
  std::vector<std::uint32_t> blocks;   // bitmasks, ordered by smallest member

  int block_count() const { return static_cast<int>(blocks.size()); }
};

// Visits every partition of {0..m-1} with >= 2 blocks exactly once, in
// restricted-growth-string order. Return false from the callback to stop.
void for_each_partition(int m, const std::function<bool(const Partition&)>& visit);

std::uint64_t bell_number(int m);

}  // namespace ska
