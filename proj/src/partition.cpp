#include "partition.hpp"

#include <algorithm>

#include "errors.hpp"

namespace ska {

namespace {

Partition from_rgs(const std::vector<std::uint8_t>& rgs) {
  Partition p;
  p.rgs = rgs;
  int blocks = 1 + *std::max_element(rgs.begin(), rgs.end());
  p.blocks.assign(static_cast<size_t>(blocks), 0);
  for (size_t i = 0; i < rgs.size(); ++i)
    p.blocks[rgs[i]] |= std::uint32_t{1} << i;
  return p;
}

}  // namespace

void for_each_partition(int m, const std::function<bool(const Partition&)>& visit) {
  require_internal(m >= 2 && m <= 31, "partition enumeration user count");
  // a is the restricted growth string, b[i] = max(a[0..i-1]).
  std::vector<std::uint8_t> a(static_cast<size_t>(m), 0);
  std::vector<std::uint8_t> b(static_cast<size_t>(m), 0);
  while (true) {
    if (*std::max_element(a.begin(), a.end()) > 0)  // skip the one-block partition
      if (!visit(from_rgs(a))) return;

    int i = m - 1;
    while (i > 0 && a[static_cast<size_t>(i)] > b[static_cast<size_t>(i)]) --i;
    if (i == 0) return;
    ++a[static_cast<size_t>(i)];
    for (int j = i + 1; j < m; ++j) {
      a[static_cast<size_t>(j)] = 0;
      b[static_cast<size_t>(j)] = std::max(b[static_cast<size_t>(j - 1)],
                                           a[static_cast<size_t>(j - 1)]);
    }
  }
}

std::uint64_t bell_number(int m) {
  std::vector<std::vector<std::uint64_t>> tri;
  tri.push_back({1});
  for (int i = 1; i <= m; ++i) {
    std::vector<std::uint64_t> row;
    row.push_back(tri.back().back());
    for (std::uint64_t v : tri.back()) row.push_back(row.back() + v);
    tri.push_back(std::move(row));
  }
  return tri[static_cast<size_t>(m)][0];
}

}  // namespace ska
