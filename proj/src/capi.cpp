#include "ska/ska.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "capacity.hpp"
#include "errors.hpp"
#include "oracle.hpp"
#include "render.hpp"
#include "runconfig.hpp"
#include "scheme.hpp"
#include "source.hpp"
#include "synth.hpp"

struct ska_source {
  ska::FiniteLinearSource src;
};
struct ska_scheme {
  ska::SkaScheme scheme;
};
struct ska_analysis {
  ska::AnalysisResult result;
};
struct ska_verification {
  ska::VerificationReport report;
  std::string source_digest;
};
struct ska_reduction {
  ska::ReductionChain chain;
  std::string source_digest;
};

namespace {

thread_local std::string g_last_error;

ska_status status_from(ska::ErrorCode code) {
  using ska::ErrorCode;
  switch (code) {
    case ErrorCode::parse_error: return SKA_ERR_PARSE;
    case ErrorCode::validation_error: return SKA_ERR_VALIDATION;
    case ErrorCode::dimension_mismatch: return SKA_ERR_DIMENSION;
    case ErrorCode::search_budget_exceeded: return SKA_ERR_BUDGET;
    case ErrorCode::enumeration_cap_exceeded: return SKA_ERR_ENUM_CAP;
    case ErrorCode::rate_vector_infeasible: return SKA_ERR_RATE_INFEASIBLE;
    case ErrorCode::not_omniscient: return SKA_ERR_NOT_OMNISCIENT;
    case ErrorCode::no_witness: return SKA_ERR_NO_WITNESS;
    case ErrorCode::synthesis_failed: return SKA_ERR_SYNTHESIS;
    case ErrorCode::verification_failed: return SKA_ERR_VERIFICATION;
    case ErrorCode::internal_inconsistency: return SKA_ERR_INTERNAL;
    case ErrorCode::io_error: return SKA_ERR_IO;
  }
  return SKA_ERR_INTERNAL;
}

template <typename Fn>
ska_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ska::Error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SKA_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SKA_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

ska::RunConfig to_runconfig(const ska_config* cfg) {
  ska::RunConfig rc;
  if (!cfg) return rc;
  rc.seed = cfg->seed;
  rc.workers = cfg->workers;
  rc.partition_cap = cfg->partition_cap;
  rc.subspace_dim_cap = cfg->subspace_dim_cap;
  rc.enum_cap = cfg->enum_cap;
  rc.candidate_cap = cfg->candidate_cap;
  rc.skip_rs = cfg->skip_rs != 0;
  rc.format = cfg->machine_format ? ska::RunConfig::Format::machine
                                  : ska::RunConfig::Format::human;
  return rc;
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ska::fail(ska::ErrorCode::io_error, std::string("cannot open ") + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

extern "C" {

const char* ska_version(void) { return ska::kToolVersion; }

void ska_config_init(ska_config* cfg) {
  if (!cfg) return;
  ska::RunConfig defaults;
  cfg->seed = defaults.seed;
  cfg->workers = defaults.workers;
  cfg->partition_cap = defaults.partition_cap;
  cfg->subspace_dim_cap = defaults.subspace_dim_cap;
  cfg->enum_cap = defaults.enum_cap;
  cfg->candidate_cap = defaults.candidate_cap;
  cfg->skip_rs = 0;
  cfg->machine_format = 0;
}

const char* ska_last_error(void) { return g_last_error.c_str(); }

void ska_string_free(char* s) { delete[] s; }

ska_status ska_source_parse(const char* text, size_t len, ska_source** out) {
  if (!text || !out) return SKA_ERR_NULL_ARG;
  return guarded([&] {
    auto parsed = ska::FiniteLinearSource::parse(std::string(text, len));
    *out = new ska_source{std::move(parsed)};
    return SKA_OK;
  });
}

ska_status ska_source_load(const char* path, ska_source** out) {
  if (!path || !out) return SKA_ERR_NULL_ARG;
  return guarded([&] {
    auto parsed = ska::FiniteLinearSource::parse(read_file(path));
    *out = new ska_source{std::move(parsed)};
    return SKA_OK;
  });
}

void ska_source_free(ska_source* s) { delete s; }

int ska_source_field(const ska_source* s) { return s ? s->src.q() : 0; }
int ska_source_base_len(const ska_source* s) { return s ? s->src.base_len() : 0; }
int ska_source_user_count(const ska_source* s) { return s ? s->src.user_count() : 0; }

const char* ska_source_user_name(const ska_source* s, int user) {
  if (!s || user < 0 || user >= s->src.user_count()) return nullptr;
  return s->src.user(user).name.c_str();
}

ska_status ska_source_render(const ska_source* s, char** out) {
  if (!s || !out) return SKA_ERR_NULL_ARG;
  return guarded([&] {
    *out = dup_string(s->src.serialize(true));
    return SKA_OK;
  });
}

ska_status ska_source_digest(const ska_source* s, char** out) {
  if (!s || !out) return SKA_ERR_NULL_ARG;
  return guarded([&] {
    *out = dup_string(s->src.digest());
    return SKA_OK;
  });
}

ska_status ska_analyze(const ska_source* s, const ska_config* cfg, ska_analysis** out) {
  if (!s || !out) return SKA_ERR_NULL_ARG;
  return guarded([&] {
    ska::AnalysisResult res = ska::analyze(s->src, to_runconfig(cfg));
    *out = new ska_analysis{std::move(res)};
    if ((*out)->result.incomplete) {
      g_last_error = (*out)->result.budget_note;
      return SKA_ERR_BUDGET;
    }
    return SKA_OK;
  });
}

void ska_analysis_free(ska_analysis* a) { delete a; }

int ska_analysis_entropy(const ska_analysis* a) { return a ? a->result.entropy : 0; }
int ska_analysis_cs_zero(const ska_analysis* a) { return a ? a->result.cs_zero : 0; }
int ska_analysis_has_cs(const ska_analysis* a) {
  return a && a->result.cs_available ? 1 : 0;
}
int ska_analysis_cs(const ska_analysis* a) { return a ? a->result.cs : 0; }
int ska_analysis_r_co(const ska_analysis* a) { return a ? a->result.r_co : 0; }

ska_status ska_analysis_lp_value(const ska_analysis* a, int64_t* num, int64_t* den) {
  if (!a || !num || !den) return SKA_ERR_NULL_ARG;
  if (!a->result.cs_available) return SKA_ERR_BUDGET;
  *num = a->result.lp_value.numerator();
  *den = a->result.lp_value.denominator();
  return SKA_OK;
}

int ska_analysis_has_rs(const ska_analysis* a) {
  return a && a->result.rs_state == ska::RsState::done ? 1 : 0;
}
int ska_analysis_r_s(const ska_analysis* a) { return a ? a->result.r_s : 0; }
int ska_analysis_incomplete(const ska_analysis* a) {
  return a && a->result.incomplete ? 1 : 0;
}

ska_status ska_analysis_render(const ska_analysis* a, const ska_config* cfg, char** out) {
  if (!a || !out) return SKA_ERR_NULL_ARG;
  return guarded([&] {
    *out = dup_string(ska::render_analysis(a->result, to_runconfig(cfg)));
    return SKA_OK;
  });
}

ska_status ska_scheme_parse(const char* text, size_t len, ska_scheme** out) {
  if (!text || !out) return SKA_ERR_NULL_ARG;
  return guarded([&] {
    auto parsed = ska::SkaScheme::parse(std::string(text, len));
    *out = new ska_scheme{std::move(parsed)};
    return SKA_OK;
  });
}

ska_status ska_scheme_load(const char* path, ska_scheme** out) {
  if (!path || !out) return SKA_ERR_NULL_ARG;
  return guarded([&] {
    auto parsed = ska::SkaScheme::parse(read_file(path));
    *out = new ska_scheme{std::move(parsed)};
    return SKA_OK;
  });
}

void ska_scheme_free(ska_scheme* s) { delete s; }

int ska_scheme_key_length(const ska_scheme* s) {
  return s ? s->scheme.key_length() : 0;
}
int ska_scheme_total_discussion(const ska_scheme* s) {
  return s ? s->scheme.total_discussion() : 0;
}

ska_status ska_scheme_render(const ska_scheme* s, char** out) {
  if (!s || !out) return SKA_ERR_NULL_ARG;
  return guarded([&] {
    *out = dup_string(s->scheme.serialize(true));
    return SKA_OK;
  });
}

ska_status ska_synthesize(const ska_source* s, const ska_config* cfg, ska_scheme** out) {
  if (!s || !out) return SKA_ERR_NULL_ARG;
  return guarded([&] {
    auto scheme = ska::synthesize_certified(s->src, to_runconfig(cfg));
    *out = new ska_scheme{std::move(scheme)};
    return SKA_OK;
  });
}

ska_status ska_verify(const ska_source* s, const ska_scheme* scheme,
                      const ska_config* cfg, ska_verification** out) {
  if (!s || !scheme || !out) return SKA_ERR_NULL_ARG;
  return guarded([&] {
    auto report = ska::verify_scheme(s->src, scheme->scheme, to_runconfig(cfg));
    *out = new ska_verification{std::move(report), s->src.digest()};
    return SKA_OK;
  });
}

void ska_verification_free(ska_verification* v) { delete v; }

int ska_verification_certified(const ska_verification* v) {
  return v && v->report.certified() ? 1 : 0;
}

int ska_verification_user_recoverable(const ska_verification* v, int user) {
  if (!v || user < 0 || user >= static_cast<int>(v->report.users.size())) return 0;
  return v->report.users[static_cast<size_t>(user)].recoverable ? 1 : 0;
}

int ska_verification_user_omniscient(const ska_verification* v, int user) {
  if (!v || user < 0 || user >= static_cast<int>(v->report.users.size())) return 0;
  return v->report.users[static_cast<size_t>(user)].omniscient ? 1 : 0;
}

uint64_t ska_verification_realizations(const ska_verification* v) {
  return v ? v->report.realizations : 0;
}

ska_status ska_verification_render(const ska_verification* v, const ska_config* cfg,
                                   char** out) {
  if (!v || !out) return SKA_ERR_NULL_ARG;
  return guarded([&] {
    *out = dup_string(
        ska::render_verification(v->report, to_runconfig(cfg), v->source_digest));
    return SKA_OK;
  });
}

ska_status ska_reduce(const ska_source* s, const ska_scheme* scheme,
                      const ska_config* cfg, ska_reduction** out) {
  if (!s || !scheme || !out) return SKA_ERR_NULL_ARG;
  return guarded([&] {
    auto chain = ska::reduce_chain(s->src, scheme->scheme, to_runconfig(cfg));
    *out = new ska_reduction{std::move(chain), s->src.digest()};
    return SKA_OK;
  });
}

void ska_reduction_free(ska_reduction* r) { delete r; }

int ska_reduction_step_count(const ska_reduction* r) {
  return r ? static_cast<int>(r->chain.steps.size()) : 0;
}

int ska_reduction_step_entropy(const ska_reduction* r, int step) {
  if (!r || step < 0 || step >= static_cast<int>(r->chain.steps.size())) return -1;
  return r->chain.steps[static_cast<size_t>(step)].entropy_after;
}

int ska_reduction_final_r_co(const ska_reduction* r) {
  return r ? r->chain.final_r_co : 0;
}

ska_status ska_reduction_step_source(const ska_reduction* r, int step, char** out) {
  if (!r || !out) return SKA_ERR_NULL_ARG;
  if (step < 0 || step >= static_cast<int>(r->chain.steps.size()))
    return SKA_ERR_DIMENSION;
  return guarded([&] {
    *out = dup_string(r->chain.steps[static_cast<size_t>(step)].source_text);
    return SKA_OK;
  });
}

ska_status ska_reduction_render(const ska_reduction* r, const ska_config* cfg,
                                char** out) {
  if (!r || !out) return SKA_ERR_NULL_ARG;
  return guarded([&] {
    *out = dup_string(
        ska::render_reduction(r->chain, to_runconfig(cfg), r->source_digest));
    return SKA_OK;
  });
}

ska_status ska_oracle_gk(const ska_source* s, const ska_config* cfg, int* out) {
  if (!s || !out) return SKA_ERR_NULL_ARG;
  return guarded([&] {
    *out = ska::brute_force_gk(s->src, to_runconfig(cfg));
    return SKA_OK;
  });
}

ska_status ska_oracle_cs_of_r(const ska_source* s, const ska_config* cfg, int r_total,
                              int* out) {
  if (!s || !out) return SKA_ERR_NULL_ARG;
  return guarded([&] {
    *out = ska::brute_force_cs_of_r(s->src, r_total, to_runconfig(cfg));
    return SKA_OK;
  });
}

ska_status ska_oracle_check_rate(const ska_source* s, const ska_config* cfg,
                                 const int* rates, int count, int* feasible,
                                 char** witness) {
  if (!s || !rates || !feasible) return SKA_ERR_NULL_ARG;
  (void)cfg;
  return guarded([&] {
    std::vector<int> r(rates, rates + count);
    auto result = ska::check_rate_vector(s->src, r);
    *feasible = result.feasible ? 1 : 0;
    if (witness) {
      std::string names;
      if (!result.feasible) {
        for (int i = 0; i < s->src.user_count(); ++i)
          if (result.witness_mask & (std::uint32_t{1} << i)) {
            if (!names.empty()) names += ",";
            names += s->src.user(i).name;
          }
      }
      *witness = dup_string(names);
    }
    return SKA_OK;
  });
}

}  // extern "C"
