#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "capacity.hpp"
#include "runconfig.hpp"
#include "scheme.hpp"
#include "source.hpp"

namespace ska {

struct DiscussionSynthesis {
  std::vector<GfMatrix> discussion;  // per-user t_i x r_i
  std::optional<std::uint64_t> seed; // seed that produced it, if random coding won
  bool greedy = false;
};

// Finds per-user discussion maps at the given integer rates so that every
// user can reconstruct the whole base from (z_i, f_V). Random linear coding
// over a window of seeds first, deterministic greedy completion as fallback.
// The rate vector must lie in the omniscience region.
DiscussionSynthesis synthesize_omniscience(const FiniteLinearSource& s,
                                           const std::vector<int>& rates,
                                           std::uint64_t seed);

// Completes an omniscience discussion to a full scheme: the key map is the
// canonical completion of the discussion to a full-rank base map, which makes
// the key exactly uniform and independent of every broadcast symbol.
SkaScheme extract_key(const FiniteLinearSource& s,
                      const std::vector<GfMatrix>& discussion,
                      SchemeMode mode);

// End-to-end optimal synthesis: reduce the source along the communication-
// complexity argmin, run omniscience on the reduced source, lift the maps
// back to the coordinates of `parsed`. The result carries exactly r_S
// discussion symbols and a key of length c_S.
SkaScheme synthesize_optimal(const FiniteLinearSource& parsed, const RunConfig& cfg);

// Same, but re-verified by exhaustive enumeration before being returned.
// `mutate` is a test seam applied between synthesis and the final check.
SkaScheme synthesize_certified(
    const FiniteLinearSource& parsed, const RunConfig& cfg,
    const std::function<void(SkaScheme&)>& mutate = {});

struct ReduceStep {
  FiniteLinearSource source;  // base shorter by one
  SkaScheme scheme;           // the same protocol in the reduced coordinates
  std::vector<GfMatrix> simulators;  // z'_i = z_i * simulators[i]
  int witness_user;
};

// One strict-reduction step: given a scheme whose discussion leaves
// `witness_user` short of omniscience, produces a source with one fewer base
// symbol on which the identical protocol still runs and still serves the
// same key. Throws no_witness if the user can already reconstruct the base.
ReduceStep reduce_step(const FiniteLinearSource& s, const SkaScheme& scheme,
                       int witness_user);

struct ReductionChainStep {
  int witness_user;
  int entropy_after;
  std::string source_text;  // serialized reduced source
};

struct ReductionChain {
  int initial_entropy = 0;
  std::vector<ReductionChainStep> steps;
  int final_r_co = 0;
};

// Applies reduce_step until no witness remains, re-verifying the scheme on
// each intermediate source. The input pair must already verify.
ReductionChain reduce_chain(const FiniteLinearSource& parsed, const SkaScheme& scheme,
                            const RunConfig& cfg);

}  // namespace ska
