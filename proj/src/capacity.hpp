#pragma once

#include <optional>
#include <string>
#include <vector>

#include "partition.hpp"
#include "rational.hpp"
#include "runconfig.hpp"
#include "source.hpp"

namespace ska {

struct CommonInformation {
  int dimension;    // zero-discussion key capacity
  GfMatrix basis;   // base_len x dimension; the maximal common observation
};

// Intersection of all users' observation column spaces.
CommonInformation common_information(const FiniteLinearSource& s);

struct PartitionScanResult {
  Rational lp_value;        // min over partitions of (sum H(block) - H) / (|P|-1)
  Partition argmin;         // deterministic tie-break: fewest blocks, then RGS order
  Rational dual_value;      // max over partitions of (|P| H - sum H(block)) / (|P|-1)
};

// Exhaustive scan over all partitions with >= 2 blocks. Parallel over a
// strided split; the merge is a total order, so the outcome does not depend
// on the worker count. Throws search_budget_exceeded if m > partition_cap.
PartitionScanResult scan_partitions(const FiniteLinearSource& s, int partition_cap,
                                    int workers);

// Smallest integer rate vector (lexicographically first among those summing
// to the omniscience optimum) inside the omniscience rate region.
std::vector<int> optimal_rate_vector(const FiniteLinearSource& s, int r_co);

struct RsSearchResult {
  bool complete;
  int value;                          // r_S when complete, best upper bound otherwise
  std::vector<GfMatrix> processors;   // per-user t_i x k_i reaching the bound
};

// Minimizes the omniscience complexity over all capacity-preserving per-user
// linear reductions, scanning retained total dimension in decreasing order.
RsSearchResult r_s_search(const FiniteLinearSource& s, int cs_target,
                          const RunConfig& cfg);

enum class RsState { done, skipped, budget_exceeded };

// Everything `analyze` reports. Optional pieces are absent when a budget cut
// the computation short (the report is then flagged incomplete).
struct AnalysisResult {
  std::string source_digest;
  int q = 0;
  std::vector<std::string> user_names;
  int entropy = 0;  // H(z_V)
  int cs_zero = 0;

  bool cs_available = false;
  int cs = 0;
  Rational lp_value;
  Rational dual_value;
  std::vector<std::vector<std::string>> optimal_partition;  // blocks of user names
  int r_co = 0;

  RsState rs_state = RsState::skipped;
  int r_s = 0;       // valid when rs_state == done
  int r_s_bound = 0; // valid when rs_state == budget_exceeded
  std::vector<std::string> processor_users;
  std::vector<GfMatrix> processors;

  bool incomplete = false;
  std::string budget_note;
};

// Full analysis pipeline: normalize, zero-discussion capacity, partition
// scan with the duality cross-check, then (unless skipped) the reduction
// search. Budget overruns downgrade to a partial, flagged result instead of
// throwing, so callers can still render what was computed.
AnalysisResult analyze(const FiniteLinearSource& parsed, const RunConfig& cfg);

}  // namespace ska
