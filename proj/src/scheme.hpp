#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gf.hpp"
#include "source.hpp"

namespace ska {

enum class SchemeMode { omniscience, direct };

struct SchemeUser {
  std::string name;
  GfMatrix discussion;  // t_i x r_i: broadcast symbols as functions of z_i
};

// A complete executable protocol: per-user discussion maps plus the key map
// over the source base. Always expressed in the coordinates of the source
// file it was built for, so (source, scheme) is all a verifier needs.
struct SkaScheme {
  SchemeMode mode = SchemeMode::direct;
  std::vector<SchemeUser> users;
  GfMatrix key_matrix;  // base_len x k

  std::string source_digest;  // provenance
  std::optional<std::uint64_t> seed;
  bool greedy = false;

  int key_length() const { return key_matrix.cols(); }
  int total_discussion() const;

  static SkaScheme parse(const std::string& text);
  std::string serialize(bool pretty = true) const;
};

// Throws dimension_mismatch unless the scheme lines up with the source
// (names, observation widths, key base length, matching field).
void check_scheme_shape(const FiniteLinearSource& s, const SkaScheme& scheme);

// T = [M_1 A_1 | ... | M_m A_m]: the discussion as a map from the base.
GfMatrix discussion_total(const FiniteLinearSource& s, const SkaScheme& scheme);

struct Transcript {
  std::vector<std::vector<std::uint8_t>> messages;  // per user
  std::vector<std::uint8_t> key;
};

// Runs the protocol on one realization of the base vector.
Transcript execute(const FiniteLinearSource& s, const SkaScheme& scheme,
                   const std::vector<std::uint8_t>& x);

}  // namespace ska
