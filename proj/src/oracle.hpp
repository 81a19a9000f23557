#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "runconfig.hpp"
#include "scheme.hpp"
#include "source.hpp"

namespace ska {

struct UserCheck {
  std::string name;
  bool omniscient = false;
  bool recoverable = false;
  std::optional<std::vector<std::uint8_t>> omniscience_counterexample;
  std::optional<std::vector<std::uint8_t>> recoverability_counterexample;
};

// Outcome of exhaustive enumeration over every base realization. All counts
// are exact; nothing is sampled.
struct VerificationReport {
  std::uint64_t realizations = 0;
  int key_length = 0;
  std::vector<UserCheck> users;
  bool key_uniform = false;
  bool key_independent = false;
  std::optional<std::vector<std::uint8_t>> secrecy_counterexample;

  bool certified() const {
    for (const auto& u : users)
      if (!u.recoverable) return false;
    return key_uniform && key_independent;
  }
};

// Enumerates all q^base_len realizations and checks, by grouping values and
// counting, that (a) each user's (z_i, f_V) pins down the base, (b) the key
// is constant on each user's (z_i, f_V) fiber, and (c) the key is exactly
// uniform and exactly independent of the discussion. Deliberately shares no
// rank/elimination machinery with the code it audits.
VerificationReport verify_scheme(const FiniteLinearSource& s, const SkaScheme& scheme,
                                 const RunConfig& cfg);

struct RateCheckResult {
  bool feasible = false;
  std::uint32_t witness_mask = 0;  // most violated subset when infeasible
  int required = 0;
  int provided = 0;
};

RateCheckResult check_rate_vector(const FiniteLinearSource& s,
                                  const std::vector<int>& rates);

// log_q of the number of base-generated vectors every user can compute.
int brute_force_gk(const FiniteLinearSource& s, const RunConfig& cfg);

// Exact best key length over every linear zero-randomization scheme whose
// total discussion length is at most r_total. Tiny instances only.
int brute_force_cs_of_r(const FiniteLinearSource& s, int r_total, const RunConfig& cfg);

}  // namespace ska
