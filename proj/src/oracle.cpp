#include "oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "errors.hpp"
#include "gf.hpp"
#include "workers.hpp"

namespace ska {

namespace {

std::optional<std::uint64_t> checked_pow(int base, int exp, std::uint64_t cap) {
  std::uint64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > cap / static_cast<std::uint64_t>(base)) return std::nullopt;
    v *= static_cast<std::uint64_t>(base);
  }
  return v;
}

std::vector<std::uint8_t> index_to_digits(std::uint64_t idx, int q, int len) {
  std::vector<std::uint8_t> d(static_cast<size_t>(len));
  for (int i = 0; i < len; ++i) {
    d[static_cast<size_t>(i)] = static_cast<std::uint8_t>(idx % static_cast<std::uint64_t>(q));
    idx /= static_cast<std::uint64_t>(q);
  }
  return d;
}

std::string bytes(const std::vector<std::uint8_t>& v) {
  return std::string(v.begin(), v.end());
}

// Merged per-fiber tallies. min_x keeps counterexamples deterministic.
struct FiberStats {
  std::uint64_t count = 0;
  std::uint64_t min_x = 0;
};

struct Cell {
  std::uint64_t count = 0;
  std::uint64_t min_x = 0;
};

struct WorkerTallies {
  // per user: (z_i, f_V) -> realization count
  std::vector<std::map<std::string, FiberStats>> omni;
  // per user: (z_i, f_V) -> key value -> smallest realization
  std::vector<std::map<std::string, std::map<std::string, std::uint64_t>>> rec;
  // f_V -> key value -> tally
  std::map<std::string, std::map<std::string, Cell>> joint;
};

void merge_tallies(WorkerTallies& into, const WorkerTallies& from) {
  for (size_t i = 0; i < from.omni.size(); ++i) {
    for (const auto& [key, st] : from.omni[i]) {
      auto& slot = into.omni[i][key];
      if (slot.count == 0 || st.min_x < slot.min_x) slot.min_x = st.min_x;
      slot.count += st.count;
    }
    for (const auto& [fiber, keys] : from.rec[i])
      for (const auto& [kv, mx] : keys) {
        auto it = into.rec[i][fiber].find(kv);
        if (it == into.rec[i][fiber].end())
          into.rec[i][fiber][kv] = mx;
        else
          it->second = std::min(it->second, mx);
      }
  }
  for (const auto& [f, keys] : from.joint)
    for (const auto& [kv, cell] : keys) {
      auto& slot = into.joint[f][kv];
      if (slot.count == 0 || cell.min_x < slot.min_x) slot.min_x = cell.min_x;
      slot.count += cell.count;
    }
}

}  // namespace

VerificationReport verify_scheme(const FiniteLinearSource& s, const SkaScheme& scheme,
                                 const RunConfig& cfg) {
  check_scheme_shape(s, scheme);
  const int q = s.q();
  const int l = s.base_len();
  const int m = s.user_count();

  auto total = checked_pow(q, l, cfg.enum_cap);
  if (!total)
    fail(ErrorCode::enumeration_cap_exceeded,
         "q^base_len exceeds the enumeration cap");
  const std::uint64_t n = *total;

  const int workers = std::max(1, std::min<int>(cfg.resolved_workers(),
                                                static_cast<int>(std::min<std::uint64_t>(n, 64))));
  std::vector<WorkerTallies> partials(static_cast<size_t>(workers));

  run_workers(workers, [&](int w, int nw) {
    WorkerTallies t;
    t.omni.resize(static_cast<size_t>(m));
    t.rec.resize(static_cast<size_t>(m));
    const std::uint64_t begin = n * static_cast<std::uint64_t>(w) / static_cast<std::uint64_t>(nw);
    const std::uint64_t end = n * static_cast<std::uint64_t>(w + 1) / static_cast<std::uint64_t>(nw);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      std::vector<std::uint8_t> x = index_to_digits(idx, q, l);
      std::string f_all;
      std::vector<std::string> z_strs(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i) {
        auto z = row_times(x, s.user(i).observation);
        auto f = row_times(z, scheme.users[static_cast<size_t>(i)].discussion);
        z_strs[static_cast<size_t>(i)] = bytes(z);
        f_all += bytes(f);
      }
      std::string key = bytes(row_times(x, scheme.key_matrix));
      for (int i = 0; i < m; ++i) {
        std::string fiber = z_strs[static_cast<size_t>(i)] + '\x01' + f_all;
        auto& slot = t.omni[static_cast<size_t>(i)][fiber];
        if (slot.count == 0 || idx < slot.min_x) slot.min_x = idx;
        slot.count += 1;
        auto& keymap = t.rec[static_cast<size_t>(i)][fiber];
        auto it = keymap.find(key);
        if (it == keymap.end())
          keymap[key] = idx;
        else
          it->second = std::min(it->second, idx);
      }
      auto& cell = t.joint[f_all][key];
      if (cell.count == 0 || idx < cell.min_x) cell.min_x = idx;
      cell.count += 1;
    }
    partials[static_cast<size_t>(w)] = std::move(t);
  });

  WorkerTallies tallies;
  tallies.omni.resize(static_cast<size_t>(m));
  tallies.rec.resize(static_cast<size_t>(m));
  for (const auto& p : partials) merge_tallies(tallies, p);

  VerificationReport report;
  report.realizations = n;
  report.key_length = scheme.key_length();

  for (int i = 0; i < m; ++i) {
    UserCheck check;
    check.name = s.user(i).name;
    check.omniscient = true;
    std::uint64_t omni_cex = n;
    for (const auto& [fiber, st] : tallies.omni[static_cast<size_t>(i)])
      if (st.count > 1) {
        check.omniscient = false;
        omni_cex = std::min(omni_cex, st.min_x);
      }
    if (!check.omniscient)
      check.omniscience_counterexample = index_to_digits(omni_cex, q, l);

    check.recoverable = true;
    std::uint64_t rec_cex = n;
    for (const auto& [fiber, keys] : tallies.rec[static_cast<size_t>(i)])
      if (keys.size() > 1) {
        check.recoverable = false;
        for (const auto& [kv, mx] : keys) rec_cex = std::min(rec_cex, mx);
      }
    if (!check.recoverable)
      check.recoverability_counterexample = index_to_digits(rec_cex, q, l);
    report.users.push_back(std::move(check));
  }

  const auto key_space = checked_pow(q, scheme.key_length(), n);
  // A key longer than the base can never be uniform; flag instead of failing.
  if (!key_space) {
    report.key_uniform = false;
    report.key_independent = false;
    report.secrecy_counterexample = index_to_digits(0, q, l);
    return report;
  }
  const std::uint64_t expected_keys = *key_space;

  report.key_independent = true;
  std::uint64_t indep_cex = n;
  for (const auto& [f, keys] : tallies.joint) {
    bool balanced = keys.size() == expected_keys;
    std::uint64_t count0 = keys.empty() ? 0 : keys.begin()->second.count;
    for (const auto& [kv, cell] : keys)
      if (cell.count != count0) balanced = false;
    if (!balanced) {
      report.key_independent = false;
      for (const auto& [kv, cell] : keys) indep_cex = std::min(indep_cex, cell.min_x);
    }
  }

  std::map<std::string, Cell> marginal;
  for (const auto& [f, keys] : tallies.joint)
    for (const auto& [kv, cell] : keys) {
      auto& slot = marginal[kv];
      if (slot.count == 0 || cell.min_x < slot.min_x) slot.min_x = cell.min_x;
      slot.count += cell.count;
    }
  report.key_uniform = marginal.size() == expected_keys;
  std::uint64_t uniform_cex = n;
  const std::uint64_t per_key = n / expected_keys;
  for (const auto& [kv, cell] : marginal)
    if (cell.count != per_key) {
      report.key_uniform = false;
      uniform_cex = std::min(uniform_cex, cell.min_x);
    }

  if (!report.key_independent)
    report.secrecy_counterexample = index_to_digits(indep_cex, q, l);
  else if (!report.key_uniform)
    report.secrecy_counterexample = index_to_digits(uniform_cex, q, l);
  return report;
}

RateCheckResult check_rate_vector(const FiniteLinearSource& s,
                                  const std::vector<int>& rates) {
  if (static_cast<int>(rates.size()) != s.user_count())
    fail(ErrorCode::dimension_mismatch, "one rate per user required");
  const std::uint32_t full = s.full_mask();
  RateCheckResult result;
  result.feasible = true;
  int worst_deficit = 0;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    int provided = 0;
    for (int i = 0; i < s.user_count(); ++i)
      if (mask & (std::uint32_t{1} << i)) provided += rates[static_cast<size_t>(i)];
    const int required = s.conditional_entropy(mask, full & ~mask);
    const int deficit = required - provided;
    if (deficit > 0 && (result.feasible || deficit > worst_deficit)) {
      result.feasible = false;
      worst_deficit = deficit;
      result.witness_mask = mask;
      result.required = required;
      result.provided = provided;
    } else if (deficit > 0) {
      result.feasible = false;
    }
  }
  return result;
}

int brute_force_gk(const FiniteLinearSource& s, const RunConfig& cfg) {
  const int q = s.q();
  if (!checked_pow(q, s.base_len(), cfg.enum_cap))
    fail(ErrorCode::enumeration_cap_exceeded,
         "q^base_len exceeds the enumeration cap");

  std::set<std::string> common;
  for (int i = 0; i < s.user_count(); ++i) {
    const GfMatrix& obs = s.user(i).observation;
    auto combos = checked_pow(q, obs.cols(), cfg.enum_cap);
    if (!combos)
      fail(ErrorCode::enumeration_cap_exceeded,
           "observation span enumeration exceeds the cap");
    std::set<std::string> span;
    GfMatrix obs_t = transpose(obs);
    for (std::uint64_t c = 0; c < *combos; ++c) {
      auto coeff = index_to_digits(c, q, obs.cols());
      span.insert(bytes(row_times(coeff, obs_t)));
    }
    if (i == 0) {
      common = std::move(span);
    } else {
      std::set<std::string> kept;
      for (const auto& v : common)
        if (span.count(v)) kept.insert(v);
      common = std::move(kept);
    }
  }

  std::uint64_t count = common.size();
  int log = 0;
  while (count > 1) {
    require_internal(count % static_cast<std::uint64_t>(q) == 0,
                     "common span size is not a power of the field order");
    count /= static_cast<std::uint64_t>(q);
    ++log;
  }
  require_internal(count == 1, "empty common span");
  return log;
}

namespace {

void compositions_rec(int total, int parts, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    cur.push_back(v);
    compositions_rec(total - v, parts - 1, cur, out);
    cur.pop_back();
  }
}

struct WorkBudget {
  std::uint64_t used = 0;
  std::uint64_t cap;
  void charge(std::uint64_t amount) {
    used += amount;
    if (used > cap)
      fail(ErrorCode::enumeration_cap_exceeded,
           "scheme enumeration exceeded the candidate budget");
  }
};

// Literal pass/fail for a fixed discussion table and key map: recoverability
// fibers per user plus exact key uniformity/independence counting.
bool key_candidate_passes(const std::vector<std::vector<std::uint8_t>>& x_tab,
                          const std::vector<std::vector<std::string>>& z_tab,
                          const std::vector<std::string>& f_tab,
                          const GfMatrix& key_matrix, int m, int q) {
  const std::uint64_t n = x_tab.size();
  std::vector<std::map<std::string, std::string>> fiber_key(static_cast<size_t>(m));
  std::map<std::string, std::map<std::string, std::uint64_t>> joint;
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    std::string key = bytes(row_times(x_tab[static_cast<size_t>(idx)], key_matrix));
    for (int i = 0; i < m; ++i) {
      std::string fiber = z_tab[static_cast<size_t>(idx)][static_cast<size_t>(i)] + '\x01' +
                          f_tab[static_cast<size_t>(idx)];
      auto [it, inserted] = fiber_key[static_cast<size_t>(i)].emplace(fiber, key);
      if (!inserted && it->second != key) return false;
    }
    joint[f_tab[static_cast<size_t>(idx)]][key] += 1;
  }
  auto key_space = checked_pow(q, key_matrix.cols(), n);
  if (!key_space) return false;
  const std::uint64_t expected_keys = *key_space;
  std::map<std::string, std::uint64_t> marginal;
  for (const auto& [f, keys] : joint) {
    if (keys.size() != expected_keys) return false;
    std::uint64_t count0 = keys.begin()->second;
    for (const auto& [kv, count] : keys) {
      if (count != count0) return false;
      marginal[kv] += count;
    }
  }
  if (marginal.size() != expected_keys) return false;
  std::uint64_t per_key = n / expected_keys;
  for (const auto& [kv, count] : marginal)
    if (count != per_key) return false;
  return true;
}

}  // namespace

int brute_force_cs_of_r(const FiniteLinearSource& s, int r_total, const RunConfig& cfg) {
  if (r_total < 0)
    fail(ErrorCode::validation_error, "discussion budget must be non-negative");
  const int q = s.q();
  const int l = s.base_len();
  const int m = s.user_count();

  auto total = checked_pow(q, l, cfg.enum_cap);
  if (!total)
    fail(ErrorCode::enumeration_cap_exceeded, "q^base_len exceeds the enumeration cap");
  const std::uint64_t n = *total;
  WorkBudget budget{0, cfg.candidate_cap};

  std::vector<std::vector<std::uint8_t>> x_tab;
  x_tab.reserve(static_cast<size_t>(n));
  std::vector<std::vector<std::string>> z_tab(static_cast<size_t>(n));
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    x_tab.push_back(index_to_digits(idx, q, l));
    for (int i = 0; i < m; ++i)
      z_tab[static_cast<size_t>(idx)].push_back(
          bytes(row_times(x_tab.back(), s.user(i).observation)));
  }

  // Candidate discussions, canonicalized per user by the column space of the
  // coefficient map: one basis per subspace of F^{t_i} with dim <= r_i.
  std::vector<std::vector<GfMatrix>> options(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    const int t_i = s.user(i).observation.cols();
    GfMatrix ambient = GfMatrix::identity(s.field(), t_i);
    for_each_subspace(ambient, t_i, [&](const GfMatrix& sub) {
      options[static_cast<size_t>(i)].push_back(sub);
      return true;
    });
  }

  std::vector<std::vector<int>> compositions;
  {
    std::vector<int> cur;
    compositions_rec(r_total, m, cur, compositions);
  }

  int best = 0;
  std::set<std::uint64_t> seen_infos;

  std::vector<int> pick(static_cast<size_t>(m), 0);
  for (const auto& comp : compositions) {
    // Per-user candidate lists restricted to this composition's widths.
    std::vector<std::vector<const GfMatrix*>> lists(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i)
      for (const auto& sub : options[static_cast<size_t>(i)])
        if (sub.cols() <= comp[static_cast<size_t>(i)])
          lists[static_cast<size_t>(i)].push_back(&sub);

    std::fill(pick.begin(), pick.end(), 0);
    while (true) {
      budget.charge(n);
      // Discussion value table for this candidate tuple.
      std::vector<std::string> f_tab(static_cast<size_t>(n));
      for (std::uint64_t idx = 0; idx < n; ++idx) {
        std::string f_all;
        for (int i = 0; i < m; ++i) {
          const GfMatrix& sub = *lists[static_cast<size_t>(i)][static_cast<size_t>(pick[static_cast<size_t>(i)])];
          const std::string& z = z_tab[static_cast<size_t>(idx)][static_cast<size_t>(i)];
          for (int c = 0; c < sub.cols(); ++c) {
            int acc = 0;
            for (int r = 0; r < sub.rows(); ++r)
              acc += static_cast<int>(static_cast<unsigned char>(z[static_cast<size_t>(r)])) * sub.at(r, c);
            f_all.push_back(static_cast<char>(acc % q));
          }
        }
        f_tab[static_cast<size_t>(idx)] = std::move(f_all);
      }

      std::uint64_t info_hash = 0;
      {
        std::string blob;
        for (const auto& f : f_tab) {
          blob += f;
          blob.push_back('\x02');
        }
        info_hash = fnv1a64(blob);
      }
      if (seen_infos.insert(info_hash).second) {
        std::set<std::string> distinct(f_tab.begin(), f_tab.end());
        std::uint64_t count = distinct.size();
        int dim_w = 0;
        while (count > 1) {
          require_internal(count % static_cast<std::uint64_t>(q) == 0,
                           "discussion image size is not a power of the field order");
          count /= static_cast<std::uint64_t>(q);
          ++dim_w;
        }
        const int k_max = l - dim_w;
        for (int k = k_max; k > best; --k) {
          bool found = false;
          for_each_rref(s.field(), l, k, [&](const GfMatrix& coeffs) {
            budget.charge(n);
            GfMatrix key_matrix = transpose(coeffs);
            if (key_candidate_passes(x_tab, z_tab, f_tab, key_matrix, m, q)) {
              found = true;
              return false;
            }
            return true;
          });
          if (found) {
            best = k;
            break;
          }
        }
      }

      // Advance the per-user candidate odometer.
      int pos = m;
      while (pos > 0) {
        --pos;
        if (++pick[static_cast<size_t>(pos)] <
            static_cast<int>(lists[static_cast<size_t>(pos)].size()))
          break;
        pick[static_cast<size_t>(pos)] = 0;
        if (pos == 0) goto next_composition;
      }
    }
  next_composition:;
  }
  return best;
}

}  // namespace ska
