#include "render.hpp"

#include <json.hpp>

#include <sstream>

namespace ska {

using nlohmann::ordered_json;

namespace {

ordered_json header(const char* command, const RunConfig& cfg,
                    const std::string& source_digest) {
  ordered_json doc;
  doc["tool"] = "ska";
  doc["version"] = kToolVersion;
  doc["command"] = command;
  doc["seed"] = cfg.seed;
  doc["caps"] = {{"partition", cfg.partition_cap},
                 {"subspace", cfg.subspace_dim_cap},
                 {"enum", cfg.enum_cap},
                 {"candidate", cfg.candidate_cap}};
  doc["source_digest"] = source_digest;
  return doc;
}

ordered_json matrix_json(const GfMatrix& m) {
  ordered_json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  ordered_json data = ordered_json::array();
  for (int r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(static_cast<int>(m.at(r, c)));
    data.push_back(row);
  }
  j["data"] = data;
  return j;
}

std::string partition_text(const std::vector<std::vector<std::string>>& blocks) {
  std::ostringstream os;
  for (size_t b = 0; b < blocks.size(); ++b) {
    if (b) os << " | ";
    os << "{";
    for (size_t i = 0; i < blocks[b].size(); ++i) {
      if (i) os << ",";
      os << blocks[b][i];
    }
    os << "}";
  }
  return os.str();
}

}  // namespace

std::string render_analysis(const AnalysisResult& res, const RunConfig& cfg) {
  if (cfg.format == RunConfig::Format::machine) {
    ordered_json doc = header("analyze", cfg, res.source_digest);
    doc["field"] = res.q;
    doc["users"] = res.user_names;
    doc["entropy"] = res.entropy;
    doc["cs_zero"] = res.cs_zero;
    if (res.cs_available) {
      doc["cs"] = res.cs;
      doc["lp_value"] = rational_to_string(res.lp_value);
      doc["dual_value"] = rational_to_string(res.dual_value);
      doc["optimal_partition"] = res.optimal_partition;
      doc["r_co"] = res.r_co;
      switch (res.rs_state) {
        case RsState::done:
          doc["r_s"] = res.r_s;
          break;
        case RsState::budget_exceeded:
          doc["r_s_bound"] = res.r_s_bound;
          break;
        case RsState::skipped:
          doc["r_s_skipped"] = true;
          break;
      }
      if (res.rs_state != RsState::skipped) {
        ordered_json procs = ordered_json::array();
        for (size_t i = 0; i < res.processors.size(); ++i) {
          ordered_json p;
          p["user"] = res.processor_users[i];
          ordered_json m = matrix_json(res.processors[i]);
          p["rows"] = m["rows"];
          p["cols"] = m["cols"];
          p["data"] = m["data"];
          procs.push_back(p);
        }
        doc["processors"] = procs;
      }
    }
    doc["incomplete"] = res.incomplete;
    if (res.incomplete) doc["note"] = res.budget_note;
    return doc.dump(2) + "\n";
  }

  std::ostringstream os;
  os << "secret key agreement analysis\n";
  os << "  source digest : " << res.source_digest << "\n";
  os << "  field         : GF(" << res.q << ")\n";
  os << "  users         : ";
  for (size_t i = 0; i < res.user_names.size(); ++i)
    os << (i ? ", " : "") << res.user_names[i];
  os << "\n";
  os << "  seed          : " << cfg.seed << "\n";
  os << "  H(z_V)        : " << res.entropy << "\n";
  os << "  c_S(0)        : " << res.cs_zero << "\n";
  if (res.cs_available) {
    os << "  c_S           : " << res.cs << "  (optimum "
       << rational_to_string(res.lp_value) << " at partition "
       << partition_text(res.optimal_partition) << ")\n";
    os << "  r_CO          : " << res.r_co << "\n";
    switch (res.rs_state) {
      case RsState::done:
        os << "  r_S           : " << res.r_s << "\n";
        break;
      case RsState::budget_exceeded:
        os << "  r_S           : <= " << res.r_s_bound << " (search incomplete)\n";
        break;
      case RsState::skipped:
        os << "  r_S           : skipped\n";
        break;
    }
    if (res.rs_state == RsState::done) {
      os << "  processors    :\n";
      for (size_t i = 0; i < res.processors.size(); ++i)
        os << "    user " << res.processor_users[i] << ": "
           << matrix_to_string(res.processors[i]) << "\n";
    }
  } else {
    os << "  c_S           : unavailable (budget exceeded)\n";
  }
  if (res.incomplete) os << "  incomplete    : " << res.budget_note << "\n";
  return os.str();
}

std::string render_verification(const VerificationReport& rep, const RunConfig& cfg,
                                const std::string& source_digest) {
  if (cfg.format == RunConfig::Format::machine) {
    ordered_json doc = header("verify", cfg, source_digest);
    doc["realizations"] = rep.realizations;
    doc["key_length"] = rep.key_length;
    ordered_json users = ordered_json::array();
    for (const auto& u : rep.users) {
      ordered_json ju;
      ju["name"] = u.name;
      ju["omniscient"] = u.omniscient;
      ju["recoverable"] = u.recoverable;
      if (u.omniscience_counterexample)
        ju["omniscience_counterexample"] = digits_to_string(*u.omniscience_counterexample);
      if (u.recoverability_counterexample)
        ju["recoverability_counterexample"] =
            digits_to_string(*u.recoverability_counterexample);
      users.push_back(ju);
    }
    doc["users"] = users;
    doc["key_uniform"] = rep.key_uniform;
    doc["key_independent"] = rep.key_independent;
    if (rep.secrecy_counterexample)
      doc["secrecy_counterexample"] = digits_to_string(*rep.secrecy_counterexample);
    doc["certified"] = rep.certified();
    return doc.dump(2) + "\n";
  }

  std::ostringstream os;
  os << "exhaustive scheme verification\n";
  os << "  source digest : " << source_digest << "\n";
  os << "  realizations  : " << rep.realizations << "\n";
  os << "  key length    : " << rep.key_length << "\n";
  for (const auto& u : rep.users) {
    os << "  user " << u.name << "        : "
       << (u.recoverable ? "recoverable" : "NOT recoverable")
       << ", " << (u.omniscient ? "omniscient" : "not omniscient");
    if (u.recoverability_counterexample)
      os << "  (key differs at x=" << digits_to_string(*u.recoverability_counterexample)
         << ")";
    os << "\n";
  }
  os << "  key uniform   : " << (rep.key_uniform ? "yes" : "NO") << "\n";
  os << "  key independent of discussion : " << (rep.key_independent ? "yes" : "NO")
     << "\n";
  if (rep.secrecy_counterexample)
    os << "  secrecy counterexample at x=" << digits_to_string(*rep.secrecy_counterexample)
       << "\n";
  os << "  certified     : " << (rep.certified() ? "yes" : "NO") << "\n";
  return os.str();
}

std::string render_reduction(const ReductionChain& chain, const RunConfig& cfg,
                             const std::string& source_digest) {
  if (cfg.format == RunConfig::Format::machine) {
    ordered_json doc = header("reduce", cfg, source_digest);
    doc["initial_entropy"] = chain.initial_entropy;
    ordered_json steps = ordered_json::array();
    for (const auto& st : chain.steps) {
      ordered_json js;
      js["witness_user"] = st.witness_user;
      js["entropy"] = st.entropy_after;
      js["source"] = ordered_json::parse(st.source_text);
      steps.push_back(js);
    }
    doc["steps"] = steps;
    doc["final_r_co"] = chain.final_r_co;
    return doc.dump(2) + "\n";
  }

  std::ostringstream os;
  os << "reduction chain\n";
  os << "  source digest : " << source_digest << "\n";
  os << "  H(z_V)        : " << chain.initial_entropy << "\n";
  for (size_t i = 0; i < chain.steps.size(); ++i)
    os << "  step " << (i + 1) << "        : witness user index "
       << chain.steps[i].witness_user << ", H(z_V) -> "
       << chain.steps[i].entropy_after << "\n";
  if (chain.steps.empty()) os << "  (no reduction step: discussion is omniscient)\n";
  os << "  final r_CO    : " << chain.final_r_co << "\n";
  return os.str();
}

}  // namespace ska
