#include "synth.hpp"

#include <algorithm>
#include <random>

#include "errors.hpp"
#include "oracle.hpp"

namespace ska {

namespace {

constexpr int kRandomAttempts = 64;

void check_rates_in_region(const FiniteLinearSource& s, const std::vector<int>& rates) {
  if (static_cast<int>(rates.size()) != s.user_count())
    fail(ErrorCode::dimension_mismatch, "one rate per user required");
  for (int r : rates)
    if (r < 0) fail(ErrorCode::rate_vector_infeasible, "rates must be non-negative");
  const std::uint32_t full = s.full_mask();
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    int sum = 0;
    for (int i = 0; i < s.user_count(); ++i)
      if (mask & (std::uint32_t{1} << i)) sum += rates[static_cast<size_t>(i)];
    if (sum < s.conditional_entropy(mask, full & ~mask))
      fail(ErrorCode::rate_vector_infeasible,
           "rate vector violates the omniscience region");
  }
}

bool renders_omniscience(const FiniteLinearSource& s,
                         const std::vector<GfMatrix>& discussion) {
  GfMatrix t(s.field(), s.base_len(), 0);
  for (int i = 0; i < s.user_count(); ++i)
    t = hconcat(t, mul(s.user(i).observation, discussion[static_cast<size_t>(i)]));
  const int h = s.entropy_all();
  for (int i = 0; i < s.user_count(); ++i)
    if (rank(hconcat(s.user(i).observation, t)) != h) return false;
  return true;
}

std::vector<GfMatrix> random_discussion(const FiniteLinearSource& s,
                                        const std::vector<int>& rates,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<GfMatrix> out;
  const int q = s.q();
  for (int i = 0; i < s.user_count(); ++i) {
    const int t_i = s.user(i).observation.cols();
    const int r_i = rates[static_cast<size_t>(i)];
    GfMatrix a(s.field(), t_i, r_i);
    for (int r = 0; r < t_i; ++r)
      for (int c = 0; c < r_i; ++c)
        a.at(r, c) = static_cast<std::uint8_t>(rng() % static_cast<std::uint64_t>(q));
    out.push_back(std::move(a));
  }
  return out;
}

// Deterministic completion: pick each broadcast column, in user order, to
// maximize the worst user's reconstruction rank (total rank breaks ties,
// then the first coefficient vector in odometer order).
std::vector<GfMatrix> greedy_discussion(const FiniteLinearSource& s,
                                        const std::vector<int>& rates) {
  const int m = s.user_count();
  const int q = s.q();
  std::vector<GfMatrix> out;
  for (int i = 0; i < m; ++i)
    out.emplace_back(s.field(), s.user(i).observation.cols(), 0);

  GfMatrix t(s.field(), s.base_len(), 0);
  for (int i = 0; i < m; ++i) {
    const GfMatrix& obs = s.user(i).observation;
    const int t_i = obs.cols();
    for (int col = 0; col < rates[static_cast<size_t>(i)]; ++col) {
      std::vector<std::uint8_t> coeff(static_cast<size_t>(t_i), 0);
      std::vector<std::uint8_t> best_coeff = coeff;
      long best_min = -1, best_sum = -1;
      while (true) {
        GfMatrix candidate_col = GfMatrix::from_columns(
            s.field(), s.base_len(),
            {row_times(coeff, transpose(obs))});
        GfMatrix t_next = hconcat(t, candidate_col);
        long mn = std::numeric_limits<long>::max(), sum = 0;
        for (int u = 0; u < m; ++u) {
          long r = rank(hconcat(s.user(u).observation, t_next));
          mn = std::min(mn, r);
          sum += r;
        }
        if (mn > best_min || (mn == best_min && sum > best_sum)) {
          best_min = mn;
          best_sum = sum;
          best_coeff = coeff;
        }
        int pos = t_i;
        while (pos > 0) {
          --pos;
          if (++coeff[static_cast<size_t>(pos)] < q) break;
          coeff[static_cast<size_t>(pos)] = 0;
          if (pos == 0) goto exhausted;
        }
        if (t_i == 0) break;
      }
    exhausted:
      GfMatrix chosen = GfMatrix::from_columns(s.field(), s.base_len(),
                                               {row_times(best_coeff, transpose(obs))});
      t = hconcat(t, chosen);
      GfMatrix col(s.field(), t_i, 1);
      for (int r = 0; r < t_i; ++r) col.at(r, 0) = best_coeff[static_cast<size_t>(r)];
      out[static_cast<size_t>(i)] = hconcat(out[static_cast<size_t>(i)], col);
    }
  }
  return out;
}

}  // namespace

DiscussionSynthesis synthesize_omniscience(const FiniteLinearSource& s,
                                           const std::vector<int>& rates,
                                           std::uint64_t seed) {
  check_rates_in_region(s, rates);

  for (int attempt = 0; attempt < kRandomAttempts; ++attempt) {
    std::uint64_t attempt_seed = seed + static_cast<std::uint64_t>(attempt);
    auto discussion = random_discussion(s, rates, attempt_seed);
    if (renders_omniscience(s, discussion))
      return {std::move(discussion), attempt_seed, false};
  }

  auto discussion = greedy_discussion(s, rates);
  if (!renders_omniscience(s, discussion))
    fail(ErrorCode::synthesis_failed,
         "no omniscience discussion found at a rate vector inside the region");
  return {std::move(discussion), std::nullopt, true};
}

SkaScheme extract_key(const FiniteLinearSource& s,
                      const std::vector<GfMatrix>& discussion, SchemeMode mode) {
  require_internal(s.is_normalized(), "key extraction requires a normalized source");
  const int h = s.entropy_all();

  GfMatrix t(s.field(), s.base_len(), 0);
  for (int i = 0; i < s.user_count(); ++i)
    t = hconcat(t, mul(s.user(i).observation, discussion[static_cast<size_t>(i)]));
  for (int i = 0; i < s.user_count(); ++i)
    if (rank(hconcat(s.user(i).observation, t)) != h)
      fail(ErrorCode::not_omniscient,
           "discussion does not render omniscience for user " + s.user(i).name);

  GfMatrix key = complete_to_full_column_rank(t);
  require_internal(key.cols() == s.base_len() - rank(t),
                   "key completion has the wrong width");
  require_internal(rank(hconcat(t, key)) == rank(t) + key.cols(),
                   "key is not independent of the discussion");

  SkaScheme scheme;
  scheme.mode = mode;
  for (int i = 0; i < s.user_count(); ++i)
    scheme.users.push_back({s.user(i).name, discussion[static_cast<size_t>(i)]});
  scheme.key_matrix = std::move(key);
  scheme.source_digest = s.digest();
  return scheme;
}

SkaScheme synthesize_optimal(const FiniteLinearSource& parsed, const RunConfig& cfg) {
  auto [norm, to_norm] = normalize(parsed);
  PartitionScanResult scan =
      scan_partitions(norm, cfg.partition_cap, cfg.resolved_workers());
  const int cs = static_cast<int>(floor_rat(scan.lp_value));

  RsSearchResult rs = r_s_search(norm, cs, cfg);
  if (!rs.complete)
    fail(ErrorCode::search_budget_exceeded,
         "reduction search did not finish within budget");

  FiniteLinearSource reduced = norm.apply_reduction(rs.processors);
  auto [red_norm, to_red] = normalize(reduced);
  require_internal(red_norm.base_len() - cs == rs.value,
                   "reduced source entropy does not match the search value");

  std::vector<int> rates = optimal_rate_vector(red_norm, rs.value);
  DiscussionSynthesis synth = synthesize_omniscience(red_norm, rates, cfg.seed);
  SkaScheme inner = extract_key(red_norm, synth.discussion, SchemeMode::omniscience);

  // Lift: discussion back through the per-user processors, key back through
  // both base changes, so the scheme runs verbatim on the parsed source.
  SkaScheme out;
  out.mode = SchemeMode::omniscience;
  for (int i = 0; i < parsed.user_count(); ++i)
    out.users.push_back({parsed.user(i).name,
                         mul(rs.processors[static_cast<size_t>(i)],
                             inner.users[static_cast<size_t>(i)].discussion)});
  out.key_matrix = mul(to_norm, mul(to_red, inner.key_matrix));
  out.source_digest = parsed.digest();
  out.seed = synth.seed;
  out.greedy = synth.greedy;

  require_internal(out.total_discussion() == rs.value,
                   "synthesized discussion length differs from r_S");
  require_internal(out.key_length() == cs,
                   "synthesized key length differs from c_S");
  return out;
}

SkaScheme synthesize_certified(const FiniteLinearSource& parsed, const RunConfig& cfg,
                               const std::function<void(SkaScheme&)>& mutate) {
  SkaScheme scheme = synthesize_optimal(parsed, cfg);
  if (mutate) mutate(scheme);
  VerificationReport report = verify_scheme(parsed, scheme, cfg);
  if (!report.certified())
    fail(ErrorCode::verification_failed,
         "synthesized scheme failed exhaustive verification");
  return scheme;
}

ReduceStep reduce_step(const FiniteLinearSource& s, const SkaScheme& scheme,
                       int witness_user) {
  require_internal(s.is_normalized(), "reduction step requires a normalized source");
  check_scheme_shape(s, scheme);
  const int l = s.base_len();
  const int m = s.user_count();
  if (witness_user < 0 || witness_user >= m)
    fail(ErrorCode::dimension_mismatch, "witness user out of range");

  GfMatrix t = discussion_total(s, scheme);
  GfMatrix blocked = hconcat(s.user(witness_user).observation, t);
  if (rank(blocked) == l)
    fail(ErrorCode::no_witness,
         "user " + s.user(witness_user).name +
             " already reconstructs the base from (z_i, f_V)");

  // A base direction invisible to the witness user and silent in the
  // discussion: any nonzero row of the left null space of [M_w | T].
  GfMatrix null_rows = left_nullspace(blocked);
  require_internal(null_rows.rows() > 0, "missing null direction");
  std::vector<std::uint8_t> xbar(static_cast<size_t>(l));
  for (int c = 0; c < l; ++c) xbar[static_cast<size_t>(c)] = null_rows.at(0, c);

  // Change of base: standard basis vectors completed around xbar, which
  // becomes the last coordinate.
  GfMatrix xbar_row(s.field(), 1, l);
  for (int c = 0; c < l; ++c) xbar_row.at(0, c) = xbar[static_cast<size_t>(c)];
  GfMatrix rows = xbar_row;
  std::vector<int> kept;
  for (int j = 0; j < l && rows.rows() < l; ++j) {
    GfMatrix e(s.field(), 1, l);
    e.at(0, j) = 1;
    GfMatrix trial(s.field(), rows.rows() + 1, l);
    for (int r = 0; r < rows.rows(); ++r)
      for (int c = 0; c < l; ++c) trial.at(r, c) = rows.at(r, c);
    for (int c = 0; c < l; ++c) trial.at(rows.rows(), c) = e.at(0, c);
    if (rank(trial) == trial.rows()) {
      rows = trial;
      kept.push_back(j);
    }
  }
  require_internal(rows.rows() == l, "could not complete the base change");
  GfMatrix base_change(s.field(), l, l);
  for (size_t r = 0; r < kept.size(); ++r)
    base_change.at(static_cast<int>(r), kept[r]) = 1;
  for (int c = 0; c < l; ++c) base_change.at(l - 1, c) = xbar[static_cast<size_t>(c)];
  require_internal(rank(base_change) == l, "base change not invertible");

  std::vector<GfMatrix> tilde;
  std::vector<bool> silent(static_cast<size_t>(m), false);
  for (int i = 0; i < m; ++i) {
    GfMatrix mi = mul(base_change, s.user(i).observation);
    bool zero_last = true;
    for (int c = 0; c < mi.cols(); ++c)
      if (mi.at(l - 1, c) != 0) zero_last = false;
    silent[static_cast<size_t>(i)] = zero_last;
    tilde.push_back(std::move(mi));
  }
  require_internal(silent[static_cast<size_t>(witness_user)],
                   "witness user still sees the dropped base direction");

  std::vector<SourceUser> reduced_users;
  std::vector<SchemeUser> reduced_scheme_users;
  std::vector<GfMatrix> simulators;
  const FieldOrder& f = s.field();
  for (int i = 0; i < m; ++i) {
    const int t_i = tilde[static_cast<size_t>(i)].cols();
    if (silent[static_cast<size_t>(i)]) {
      reduced_users.push_back({s.user(i).name, drop_last_row(tilde[static_cast<size_t>(i)])});
      reduced_scheme_users.push_back({s.user(i).name,
                                      scheme.users[static_cast<size_t>(i)].discussion});
      simulators.push_back(GfMatrix::identity(f, t_i));
      continue;
    }
    // Column operations concentrating the last base coordinate into the
    // final observation symbol, which is then dropped.
    GfMatrix w = tilde[static_cast<size_t>(i)];
    GfMatrix c_i = GfMatrix::identity(f, t_i);
    int pivot = -1;
    for (int c = 0; c < t_i; ++c)
      if (w.at(l - 1, c) != 0) {
        pivot = c;
        break;
      }
    require_internal(pivot >= 0, "missing pivot column");
    auto swap_cols = [&](GfMatrix& mat, int a, int b) {
      for (int r = 0; r < mat.rows(); ++r) std::swap(mat.at(r, a), mat.at(r, b));
    };
    if (pivot != t_i - 1) {
      swap_cols(w, pivot, t_i - 1);
      swap_cols(c_i, pivot, t_i - 1);
    }
    std::uint8_t inv = f.inv(w.at(l - 1, t_i - 1));
    for (int r = 0; r < l; ++r) w.at(r, t_i - 1) = f.mul(w.at(r, t_i - 1), inv);
    for (int r = 0; r < t_i; ++r) c_i.at(r, t_i - 1) = f.mul(c_i.at(r, t_i - 1), inv);
    for (int c = 0; c + 1 < t_i; ++c) {
      std::uint8_t factor = w.at(l - 1, c);
      if (factor == 0) continue;
      for (int r = 0; r < l; ++r)
        w.at(r, c) = f.sub(w.at(r, c), f.mul(factor, w.at(r, t_i - 1)));
      for (int r = 0; r < t_i; ++r)
        c_i.at(r, c) = f.sub(c_i.at(r, c), f.mul(factor, c_i.at(r, t_i - 1)));
    }

    GfMatrix a_prime = mul(invert(c_i), scheme.users[static_cast<size_t>(i)].discussion);
    for (int c = 0; c < a_prime.cols(); ++c)
      require_internal(a_prime.at(t_i - 1, c) == 0,
                       "discussion still uses the dropped base direction");

    reduced_users.push_back({s.user(i).name, drop_last_row(drop_last_column(w))});
    reduced_scheme_users.push_back({s.user(i).name, drop_last_row(a_prime)});
    simulators.push_back(drop_last_column(c_i));
  }

  GfMatrix key_tilde = mul(base_change, scheme.key_matrix);
  for (int c = 0; c < key_tilde.cols(); ++c)
    require_internal(key_tilde.at(l - 1, c) == 0,
                     "key still uses the dropped base direction");

  ReduceStep step{
      FiniteLinearSource(f, l - 1, std::move(reduced_users)),
      SkaScheme{},
      std::move(simulators),
      witness_user,
  };
  step.scheme.mode = scheme.mode;
  step.scheme.users = std::move(reduced_scheme_users);
  step.scheme.key_matrix = drop_last_row(key_tilde);
  step.scheme.source_digest = step.source.digest();
  step.scheme.seed = scheme.seed;
  step.scheme.greedy = scheme.greedy;
  return step;
}

namespace {

// Re-expresses the key map over a fresh base after normalization.
SkaScheme rebase_scheme(const SkaScheme& scheme, const GfMatrix& base_change) {
  auto witness = span_witness(scheme.key_matrix, base_change);
  require_internal(witness.has_value(), "key left the observable span");
  SkaScheme out = scheme;
  out.key_matrix = *witness;
  return out;
}

int first_witness(const FiniteLinearSource& s, const SkaScheme& scheme) {
  GfMatrix t = discussion_total(s, scheme);
  const int h = s.entropy_all();
  for (int i = 0; i < s.user_count(); ++i)
    if (rank(hconcat(s.user(i).observation, t)) != h) return i;
  return -1;
}

}  // namespace

ReductionChain reduce_chain(const FiniteLinearSource& parsed, const SkaScheme& scheme,
                            const RunConfig& cfg) {
  VerificationReport input_report = verify_scheme(parsed, scheme, cfg);
  if (!input_report.certified())
    fail(ErrorCode::verification_failed, "input scheme does not verify");

  ReductionChain chain;
  chain.initial_entropy = parsed.entropy_all();

  auto [cur, base_change] = normalize(parsed);
  SkaScheme cur_scheme = rebase_scheme(scheme, base_change);

  for (int iter = 0; iter <= parsed.base_len(); ++iter) {
    int w = first_witness(cur, cur_scheme);
    if (w < 0) break;
    ReduceStep step = reduce_step(cur, cur_scheme, w);
    VerificationReport rep = verify_scheme(step.source, step.scheme, cfg);
    require_internal(rep.certified(), "scheme failed on a reduced source");
    chain.steps.push_back({w, step.source.entropy_all(), step.source.serialize(true)});

    auto [next, next_change] = normalize(step.source);
    cur_scheme = rebase_scheme(step.scheme, next_change);
    cur = std::move(next);
  }

  PartitionScanResult scan =
      scan_partitions(cur, cfg.partition_cap, cfg.resolved_workers());
  chain.final_r_co = cur.entropy_all() - static_cast<int>(floor_rat(scan.lp_value));
  return chain;
}

}  // namespace ska
