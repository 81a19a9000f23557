#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gf.hpp"

namespace ska {

struct SourceUser {
  std::string name;
  GfMatrix observation;  // base_len x t_i; column j holds symbol j's coefficients
};

// A multi-terminal source where user i observes z_i = x * M_i for a shared
// uniform base vector x of base_len field elements. Immutable after
// construction; subset entropies (ranks) are memoized behind a mutex so the
// search loops can hammer them from any thread.
class FiniteLinearSource {
 public:
  FiniteLinearSource(FieldOrder field, int base_len, std::vector<SourceUser> users);
  FiniteLinearSource(const FiniteLinearSource& other);
  FiniteLinearSource& operator=(const FiniteLinearSource&) = delete;
  FiniteLinearSource(FiniteLinearSource&&) = default;
  FiniteLinearSource& operator=(FiniteLinearSource&&) = default;

  const FieldOrder& field() const noexcept { return field_; }
  int q() const noexcept { return field_.order(); }
  int base_len() const noexcept { return base_len_; }
  int user_count() const noexcept { return static_cast<int>(users_.size()); }
  const SourceUser& user(int i) const { return users_[static_cast<size_t>(i)]; }
  const std::vector<SourceUser>& users() const noexcept { return users_; }
  std::uint32_t full_mask() const {
    return (user_count() >= 32) ? 0xffffffffu
                                : ((std::uint32_t{1} << user_count()) - 1);
  }

  // Horizontal concatenation of the observation matrices selected by mask.
  GfMatrix concat(std::uint32_t mask) const;

  // H(z_B) = rank of the concatenated observation block, in log_q units.
  int entropy(std::uint32_t mask) const;
  int entropy_all() const { return entropy(full_mask()); }
  // H(z_B | z_C) = H(z_{B∪C}) - H(z_C).
  int conditional_entropy(std::uint32_t b, std::uint32_t c) const;

  bool is_normalized() const { return entropy_all() == base_len_; }

  // Per-user post-processing z'_i = z_i * C_i. Keeps zero-width users so
  // indices stay aligned; the result is not re-normalized.
  FiniteLinearSource apply_reduction(const std::vector<GfMatrix>& processors) const;

  // Observation tuple for one realization of the base vector.
  std::vector<std::vector<std::uint8_t>> evaluate(const std::vector<std::uint8_t>& x) const;

  static FiniteLinearSource parse(const std::string& text);
  std::string serialize(bool pretty = true) const;
  std::string digest() const;

 private:
  struct EntropyMemo {
    std::mutex mutex;
    std::unordered_map<std::uint32_t, int> table;
  };

  FieldOrder field_;
  int base_len_;
  std::vector<SourceUser> users_;
  mutable std::unique_ptr<EntropyMemo> memo_;
};

// Rewrites the source over a minimal base (length = H(z_V)) without changing
// the joint distribution of the observations. Returns the normalized source
// and the change-of-base matrix B with M_i = B * M'_i.
std::pair<FiniteLinearSource, GfMatrix> normalize(const FiniteLinearSource& s);

std::uint64_t fnv1a64(const std::string& bytes);
std::string digits_to_string(const std::vector<std::uint8_t>& digits);

}  // namespace ska
