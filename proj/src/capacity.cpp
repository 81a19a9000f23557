#include "capacity.hpp"

#include <algorithm>
#include <atomic>
#include <limits>

#include "errors.hpp"
#include "workers.hpp"

namespace ska {

namespace {

constexpr std::uint64_t kRsCandidateGuard = std::uint64_t{1} << 22;

struct ScanCandidate {
  Rational value;
  int blocks = 0;
  std::vector<std::uint8_t> rgs;
  bool valid = false;

  // Total order used for the deterministic merge.
  bool better_than(const ScanCandidate& other) const {
    if (!other.valid) return valid;
    if (!valid) return false;
    if (value != other.value) return value < other.value;
    if (blocks != other.blocks) return blocks < other.blocks;
    return rgs < other.rgs;
  }
};

}  // namespace

CommonInformation common_information(const FiniteLinearSource& s) {
  GfMatrix common = column_space_basis(s.user(0).observation);
  for (int i = 1; i < s.user_count() && common.cols() > 0; ++i)
    common = column_space_intersection(common, s.user(i).observation);
  return {common.cols(), common};
}

PartitionScanResult scan_partitions(const FiniteLinearSource& s, int partition_cap,
                                    int workers) {
  const int m = s.user_count();
  if (m > partition_cap)
    fail(ErrorCode::search_budget_exceeded,
         "partition scan over " + std::to_string(m) + " users exceeds cap " +
             std::to_string(partition_cap));

  const int total_h = s.entropy_all();
  std::vector<ScanCandidate> mins(static_cast<size_t>(std::max(workers, 1)));
  std::vector<Rational> duals(static_cast<size_t>(std::max(workers, 1)),
                              Rational(std::numeric_limits<std::int32_t>::min()));

  run_workers(workers, [&](int w, int nw) {
    ScanCandidate local;
    Rational local_dual(std::numeric_limits<std::int32_t>::min());
    std::uint64_t ordinal = 0;
    for_each_partition(m, [&](const Partition& p) {
      if (ordinal++ % static_cast<std::uint64_t>(nw) != static_cast<std::uint64_t>(w))
        return true;
      std::int64_t sum_h = 0;
      for (std::uint32_t block : p.blocks) sum_h += s.entropy(block);
      const int k = p.block_count();
      Rational value(sum_h - total_h, k - 1);
      Rational dual(static_cast<std::int64_t>(k) * total_h - sum_h, k - 1);
      if (dual > local_dual) local_dual = dual;
      ScanCandidate cand{value, k, p.rgs, true};
      if (cand.better_than(local)) local = std::move(cand);
      return true;
    });
    mins[static_cast<size_t>(w)] = std::move(local);
    duals[static_cast<size_t>(w)] = local_dual;
  });

  ScanCandidate best;
  Rational dual(std::numeric_limits<std::int32_t>::min());
  for (size_t w = 0; w < mins.size(); ++w) {
    if (mins[w].better_than(best)) best = mins[w];
    if (duals[w] > dual) dual = duals[w];
  }
  require_internal(best.valid, "partition scan found no partition");

  Partition arg;
  arg.rgs = best.rgs;
  arg.blocks.assign(static_cast<size_t>(best.blocks), 0);
  for (size_t i = 0; i < best.rgs.size(); ++i)
    arg.blocks[best.rgs[i]] |= std::uint32_t{1} << i;
  return {best.value, std::move(arg), dual};
}

namespace {

bool composition_feasible(const std::vector<int>& r,
                          const std::vector<int>& threshold, int m) {
  const std::uint32_t full = (std::uint32_t{1} << m) - 1;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    int sum = 0;
    for (int i = 0; i < m; ++i)
      if (mask & (std::uint32_t{1} << i)) sum += r[static_cast<size_t>(i)];
    if (sum < threshold[mask]) return false;
  }
  return true;
}

bool next_feasible_composition(std::vector<int>& r, int pos, int remaining,
                               const std::vector<int>& threshold, int m) {
  if (pos == m - 1) {
    r[static_cast<size_t>(pos)] = remaining;
    return composition_feasible(r, threshold, m);
  }
  for (int v = 0; v <= remaining; ++v) {
    r[static_cast<size_t>(pos)] = v;
    if (next_feasible_composition(r, pos + 1, remaining - v, threshold, m))
      return true;
  }
  return false;
}

}  // namespace

std::vector<int> optimal_rate_vector(const FiniteLinearSource& s, int r_co) {
  const int m = s.user_count();
  const std::uint32_t full = s.full_mask();
  std::vector<int> threshold(static_cast<size_t>(full) + 1, 0);
  for (std::uint32_t mask = 1; mask < full; ++mask)
    threshold[mask] = s.conditional_entropy(mask, full & ~mask);

  std::vector<int> r(static_cast<size_t>(m), 0);
  if (!next_feasible_composition(r, 0, r_co, threshold, m))
    fail(ErrorCode::internal_inconsistency,
         "no integer rate vector of total " + std::to_string(r_co) +
             " lies in the omniscience region");
  return r;
}

namespace {

struct SubspaceOption {
  GfMatrix ambient;  // base_len x dim columns inside colspace(M_i)
  int dim;
};

struct RsBest {
  int value;
  std::vector<int> position;  // per-user option indices; empty = sentinel identity
  std::vector<GfMatrix> spaces;
  bool from_scan = false;

  bool improves(int candidate_value) const { return candidate_value < value; }
};

struct RsSearchCtx {
  const FiniteLinearSource& source;
  int m;
  int cs_target;
  int partition_cap;
  const std::vector<std::vector<SubspaceOption>>& options;
  std::vector<int> suffix_max;  // max retained dims over users j..m-1
};

int cs_of(const FiniteLinearSource& src, int partition_cap) {
  return static_cast<int>(floor_rat(scan_partitions(src, partition_cap, 1).lp_value));
}

FiniteLinearSource hybrid_source(const RsSearchCtx& ctx,
                                 const std::vector<const GfMatrix*>& chosen,
                                 int upto) {
  std::vector<SourceUser> users;
  users.reserve(static_cast<size_t>(ctx.m));
  for (int i = 0; i < ctx.m; ++i) {
    if (i < upto)
      users.push_back({ctx.source.user(i).name, *chosen[static_cast<size_t>(i)]});
    else
      users.push_back(ctx.source.user(i));
  }
  return FiniteLinearSource(ctx.source.field(), ctx.source.base_len(), std::move(users));
}

// Depth-first walk over assignments whose retained dimensions sum to exactly
// `need` across users j..m-1. Options are visited in index order, which makes
// the first improving candidate canonical.
void rs_dfs(const RsSearchCtx& ctx, int j, int need, const GfMatrix& prefix,
            std::vector<const GfMatrix*>& chosen, std::vector<int>& position,
            RsBest& best) {
  if (j == ctx.m) {
    const int h = rank(prefix);
    const int value = h - ctx.cs_target;
    if (!best.improves(value)) return;
    FiniteLinearSource candidate = hybrid_source(ctx, chosen, ctx.m);
    if (cs_of(candidate, ctx.partition_cap) != ctx.cs_target) return;
    best.value = value;
    best.position = position;
    best.spaces.clear();
    for (const GfMatrix* sp : chosen) best.spaces.push_back(*sp);
    best.from_scan = true;
    return;
  }
  const auto& opts = ctx.options[static_cast<size_t>(j)];
  const int rest_max = ctx.suffix_max[static_cast<size_t>(j) + 1];
  for (int idx = 0; idx < static_cast<int>(opts.size()); ++idx) {
    const auto& opt = opts[static_cast<size_t>(idx)];
    if (opt.dim > need || need - opt.dim > rest_max) continue;
    GfMatrix next_prefix = hconcat(prefix, opt.ambient);
    // The candidate entropy is at least the prefix rank, so subtrees that
    // cannot strictly improve are skipped.
    if (rank(next_prefix) - ctx.cs_target >= best.value) continue;
    chosen[static_cast<size_t>(j)] = &opt.ambient;
    position[static_cast<size_t>(j)] = idx;
    // Best-case capacity with the remaining users untouched; reductions only
    // lower it, so falling below the target kills the whole subtree.
    if (j + 1 < ctx.m) {
      FiniteLinearSource hybrid = hybrid_source(ctx, chosen, j + 1);
      if (cs_of(hybrid, ctx.partition_cap) < ctx.cs_target) continue;
    }
    rs_dfs(ctx, j + 1, need - opt.dim, next_prefix, chosen, position, best);
  }
}

}  // namespace

RsSearchResult r_s_search(const FiniteLinearSource& s, int cs_target,
                          const RunConfig& cfg) {
  const int m = s.user_count();
  const int r_co_bound = s.entropy_all() - cs_target;

  // Identity fallback: keep each user's full column space. Always a valid
  // reduction, so it doubles as the bound reported on budget overruns.
  std::vector<GfMatrix> identity_spaces;
  std::vector<GfMatrix> identity_processors;
  for (int i = 0; i < m; ++i) {
    GfMatrix basis = column_space_basis(s.user(i).observation);
    identity_spaces.push_back(basis);
  }

  auto processors_for = [&](const std::vector<GfMatrix>& spaces) {
    std::vector<GfMatrix> procs;
    for (int i = 0; i < m; ++i) {
      auto w = span_witness(spaces[static_cast<size_t>(i)], s.user(i).observation);
      require_internal(w.has_value(), "reduction outside the observation span");
      procs.push_back(*w);
    }
    return procs;
  };

  std::uint64_t candidates = 1;
  bool over_budget = false;
  for (int i = 0; i < m && !over_budget; ++i) {
    int d = identity_spaces[static_cast<size_t>(i)].cols();
    if (d > cfg.subspace_dim_cap) {
      over_budget = true;
      break;
    }
    std::uint64_t count = galois_number(s.q(), d);
    if (count != 0 && candidates > kRsCandidateGuard / count) {
      over_budget = true;
      break;
    }
    candidates *= count;
  }
  if (over_budget)
    return {false, r_co_bound, processors_for(identity_spaces)};

  std::vector<std::vector<SubspaceOption>> options(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    for_each_subspace(identity_spaces[static_cast<size_t>(i)], cfg.subspace_dim_cap,
                      [&](const GfMatrix& sub) {
                        options[static_cast<size_t>(i)].push_back({sub, sub.cols()});
                        return true;
                      });
  }

  std::vector<int> suffix_max(static_cast<size_t>(m) + 1, 0);
  for (int i = m - 1; i >= 0; --i)
    suffix_max[static_cast<size_t>(i)] =
        suffix_max[static_cast<size_t>(i) + 1] +
        identity_spaces[static_cast<size_t>(i)].cols();
  const int total_dim = suffix_max[0];

  RsSearchCtx ctx{s, m, cs_target, cfg.partition_cap, options, suffix_max};

  RsBest global{r_co_bound, {}, identity_spaces, false};
  const int workers = cfg.resolved_workers();

  // Levels of retained total dimension, largest first. The full-dimension
  // level holds only the identity assignment, which is the initial bound.
  for (int level = total_dim - 1; level >= cs_target && global.value > 0; --level) {
    std::vector<int> first_indices;
    for (int idx = 0; idx < static_cast<int>(options[0].size()); ++idx) {
      int d = options[0][static_cast<size_t>(idx)].dim;
      if (d <= level && level - d <= suffix_max[1]) first_indices.push_back(idx);
    }
    if (first_indices.empty()) continue;

    std::vector<RsBest> locals(
        static_cast<size_t>(workers),
        RsBest{global.value, {}, {}, false});
    run_workers(workers, [&](int w, int nw) {
      RsBest local{global.value, {}, {}, false};
      std::vector<const GfMatrix*> chosen(static_cast<size_t>(m), nullptr);
      std::vector<int> position(static_cast<size_t>(m), 0);
      for (size_t t = static_cast<size_t>(w); t < first_indices.size();
           t += static_cast<size_t>(nw)) {
        const int idx = first_indices[t];
        const auto& opt = options[0][static_cast<size_t>(idx)];
        GfMatrix prefix = hconcat(GfMatrix(s.field(), s.base_len(), 0), opt.ambient);
        if (rank(prefix) - cs_target >= local.value) continue;
        chosen[0] = &opt.ambient;
        position[0] = idx;
        if (m > 1) {
          FiniteLinearSource hybrid = hybrid_source(ctx, chosen, 1);
          if (cs_of(hybrid, cfg.partition_cap) < cs_target) continue;
        }
        rs_dfs(ctx, 1, level - opt.dim, prefix, chosen, position, local);
      }
      locals[static_cast<size_t>(w)] = std::move(local);
    });

    for (auto& local : locals) {
      if (!local.from_scan) continue;
      if (local.value < global.value ||
          (local.value == global.value && global.from_scan &&
           local.position < global.position)) {
        global = local;
      } else if (local.value == global.value && !global.from_scan) {
        // A scanned candidate never displaces the identity bound at equal
        // value; the identity is the canonical argmin in that case.
      }
    }
  }

  require_internal(global.value >= 0 && global.value <= r_co_bound,
                   "reduction search produced an out-of-range bound");
  return {true, global.value, processors_for(global.spaces)};
}

AnalysisResult analyze(const FiniteLinearSource& parsed, const RunConfig& cfg) {
  auto [norm, base_change] = normalize(parsed);
  (void)base_change;

  AnalysisResult res;
  res.source_digest = parsed.digest();
  res.q = parsed.q();
  for (const auto& u : parsed.users()) res.user_names.push_back(u.name);
  res.entropy = norm.base_len();
  res.cs_zero = common_information(norm).dimension;

  try {
    PartitionScanResult scan =
        scan_partitions(norm, cfg.partition_cap, cfg.resolved_workers());
    res.cs_available = true;
    res.lp_value = scan.lp_value;
    res.dual_value = scan.dual_value;
    res.cs = static_cast<int>(floor_rat(scan.lp_value));
    res.r_co = res.entropy - res.cs;
    // Duality identity between the partition bound and the integer region
    // optimum; a mismatch would mean broken rank arithmetic.
    require_internal(res.r_co == static_cast<int>(ceil_rat(scan.dual_value)),
                     "omniscience duality cross-check failed");
    require_internal(0 <= res.cs_zero && res.cs_zero <= res.cs && res.cs <= res.entropy,
                     "capacity ordering violated");
    for (std::uint32_t block : scan.argmin.blocks) {
      std::vector<std::string> names;
      for (int i = 0; i < parsed.user_count(); ++i)
        if (block & (std::uint32_t{1} << i)) names.push_back(res.user_names[static_cast<size_t>(i)]);
      res.optimal_partition.push_back(std::move(names));
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::search_budget_exceeded) throw;
    res.incomplete = true;
    res.budget_note = e.what();
    res.rs_state = RsState::skipped;
    return res;
  }

  if (cfg.skip_rs) {
    res.rs_state = RsState::skipped;
    return res;
  }

  RsSearchResult rs = r_s_search(norm, res.cs, cfg);
  for (const auto& u : parsed.users()) res.processor_users.push_back(u.name);
  if (rs.complete) {
    res.rs_state = RsState::done;
    res.r_s = rs.value;
    res.processors = rs.processors;
    require_internal(res.r_s <= res.r_co, "r_S exceeded r_CO");
  } else {
    res.rs_state = RsState::budget_exceeded;
    res.r_s_bound = rs.value;
    res.processors = rs.processors;
    res.incomplete = true;
    res.budget_note = "reduction search budget exceeded; bound is an upper bound";
  }
  return res;
}

}  // namespace ska
