// Command-line front end for libska. All functionality flows through the
// C API in ska/ska.h; this file only parses arguments, moves bytes between
// files and the library, and maps statuses onto documented exit codes.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ska/ska.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotCertified = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInternal = 4;

struct CommonOpts {
  ska_config cfg;
  std::string format = "human";
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--seed", o.cfg.seed, "Seed for randomized synthesis")
      ->envname("SKA_SEED");
  cmd->add_option("--workers", o.cfg.workers, "Worker threads (0 = auto)")
      ->envname("SKA_WORKERS");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"human", "machine"}))
      ->envname("SKA_FORMAT");
  cmd->add_option("--partition-cap", o.cfg.partition_cap,
                  "Max user count for the partition scan")
      ->envname("SKA_PARTITION_CAP");
  cmd->add_option("--subspace-cap", o.cfg.subspace_dim_cap,
                  "Max per-user dimension in the reduction search")
      ->envname("SKA_SUBSPACE_CAP");
  cmd->add_option("--enum-cap", o.cfg.enum_cap,
                  "Max realizations per exhaustive scan")
      ->envname("SKA_ENUM_CAP");
  cmd->add_option("--out", o.out, "Write the result to this path")
      ->envname("SKA_OUT");
}

void finalize(CommonOpts& o) {
  o.cfg.machine_format = (o.format == "machine") ? 1 : 0;
}

int fail_with(ska_status st, const char* what) {
  std::cerr << "error: " << what << ": " << ska_last_error() << "\n";
  switch (st) {
    case SKA_ERR_PARSE:
    case SKA_ERR_VALIDATION:
    case SKA_ERR_DIMENSION:
    case SKA_ERR_IO:
    case SKA_ERR_NULL_ARG:
      return kExitBadInput;
    case SKA_ERR_BUDGET:
    case SKA_ERR_ENUM_CAP:
      return kExitBudget;
    default:
      return kExitInternal;
  }
}

bool emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return true;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return false;
  }
  out << text;
  return true;
}

class SourceHandle {
 public:
  ~SourceHandle() { ska_source_free(src); }
  ska_source* src = nullptr;
};

class SchemeHandle {
 public:
  ~SchemeHandle() { ska_scheme_free(scheme); }
  ska_scheme* scheme = nullptr;
};

std::string take(char* s) {
  std::string out = s ? s : "";
  ska_string_free(s);
  return out;
}

int run_analyze(const std::string& source_path, CommonOpts& o) {
  SourceHandle src;
  ska_status st = ska_source_load(source_path.c_str(), &src.src);
  if (st != SKA_OK) return fail_with(st, "loading source");

  ska_analysis* analysis = nullptr;
  st = ska_analyze(src.src, &o.cfg, &analysis);
  if (st != SKA_OK && st != SKA_ERR_BUDGET)
    return fail_with(st, "analysis");
  int rc = kExitOk;
  if (st == SKA_ERR_BUDGET) rc = kExitBudget;  // partial report still emitted

  char* text = nullptr;
  ska_status render_st = ska_analysis_render(analysis, &o.cfg, &text);
  ska_analysis_free(analysis);
  if (render_st != SKA_OK) return fail_with(render_st, "rendering report");
  if (!emit(take(text), o.out)) return kExitBadInput;
  return rc;
}

int run_synthesize(const std::string& source_path, CommonOpts& o) {
  SourceHandle src;
  ska_status st = ska_source_load(source_path.c_str(), &src.src);
  if (st != SKA_OK) return fail_with(st, "loading source");

  SchemeHandle scheme;
  st = ska_synthesize(src.src, &o.cfg, &scheme.scheme);
  if (st == SKA_ERR_VERIFICATION) {
    std::cerr << "error: synthesized scheme failed certification: "
              << ska_last_error() << "\n";
    return kExitInternal;
  }
  if (st != SKA_OK) return fail_with(st, "synthesis");

  char* text = nullptr;
  st = ska_scheme_render(scheme.scheme, &text);
  if (st != SKA_OK) return fail_with(st, "rendering scheme");
  if (!emit(take(text), o.out)) return kExitBadInput;
  return kExitOk;
}

int run_verify(const std::string& source_path, const std::string& scheme_path,
               CommonOpts& o) {
  SourceHandle src;
  ska_status st = ska_source_load(source_path.c_str(), &src.src);
  if (st != SKA_OK) return fail_with(st, "loading source");
  SchemeHandle scheme;
  st = ska_scheme_load(scheme_path.c_str(), &scheme.scheme);
  if (st != SKA_OK) return fail_with(st, "loading scheme");

  ska_verification* verification = nullptr;
  st = ska_verify(src.src, scheme.scheme, &o.cfg, &verification);
  if (st != SKA_OK) return fail_with(st, "verification");

  char* text = nullptr;
  ska_status render_st = ska_verification_render(verification, &o.cfg, &text);
  int certified = ska_verification_certified(verification);
  ska_verification_free(verification);
  if (render_st != SKA_OK) return fail_with(render_st, "rendering report");
  if (!emit(take(text), o.out)) return kExitBadInput;
  return certified ? kExitOk : kExitNotCertified;
}

int run_reduce(const std::string& source_path, const std::string& scheme_path,
               CommonOpts& o) {
  SourceHandle src;
  ska_status st = ska_source_load(source_path.c_str(), &src.src);
  if (st != SKA_OK) return fail_with(st, "loading source");
  SchemeHandle scheme;
  st = ska_scheme_load(scheme_path.c_str(), &scheme.scheme);
  if (st != SKA_OK) return fail_with(st, "loading scheme");

  ska_reduction* reduction = nullptr;
  st = ska_reduce(src.src, scheme.scheme, &o.cfg, &reduction);
  if (st == SKA_ERR_VERIFICATION) {
    std::cerr << "error: input scheme does not verify: " << ska_last_error() << "\n";
    return kExitNotCertified;
  }
  if (st != SKA_OK) return fail_with(st, "reduction");

  int rc = kExitOk;
  char* text = nullptr;
  ska_status render_st = ska_reduction_render(reduction, &o.cfg, &text);
  if (render_st != SKA_OK) {
    ska_reduction_free(reduction);
    return fail_with(render_st, "rendering report");
  }
  std::cout << take(text);

  // Intermediate sources land next to --out as <out>.step<N>.json.
  if (!o.out.empty()) {
    const int steps = ska_reduction_step_count(reduction);
    for (int i = 0; i < steps && rc == kExitOk; ++i) {
      char* source_text = nullptr;
      if (ska_reduction_step_source(reduction, i, &source_text) != SKA_OK) {
        rc = kExitInternal;
        break;
      }
      std::string path = o.out + ".step" + std::to_string(i + 1) + ".json";
      if (!emit(take(source_text), path)) rc = kExitBadInput;
    }
  }
  ska_reduction_free(reduction);
  return rc;
}

int run_oracle_gk(const std::string& source_path, CommonOpts& o) {
  SourceHandle src;
  ska_status st = ska_source_load(source_path.c_str(), &src.src);
  if (st != SKA_OK) return fail_with(st, "loading source");
  int value = 0;
  st = ska_oracle_gk(src.src, &o.cfg, &value);
  if (st != SKA_OK) return fail_with(st, "oracle");
  std::cout << "gk " << value << "\n";
  return kExitOk;
}

int run_oracle_cs_of_r(const std::string& source_path, int r, CommonOpts& o) {
  SourceHandle src;
  ska_status st = ska_source_load(source_path.c_str(), &src.src);
  if (st != SKA_OK) return fail_with(st, "loading source");
  int value = 0;
  st = ska_oracle_cs_of_r(src.src, &o.cfg, r, &value);
  if (st != SKA_OK) return fail_with(st, "oracle");
  std::cout << "cs_of_r " << r << " " << value << "\n";
  return kExitOk;
}

int run_oracle_check_rate(const std::string& source_path, const std::vector<int>& vec,
                          CommonOpts& o) {
  SourceHandle src;
  ska_status st = ska_source_load(source_path.c_str(), &src.src);
  if (st != SKA_OK) return fail_with(st, "loading source");
  int feasible = 0;
  char* witness = nullptr;
  st = ska_oracle_check_rate(src.src, &o.cfg, vec.data(),
                             static_cast<int>(vec.size()), &feasible, &witness);
  if (st != SKA_OK) return fail_with(st, "oracle");
  std::string w = take(witness);
  if (feasible)
    std::cout << "check_rate feasible\n";
  else
    std::cout << "check_rate infeasible witness {" << w << "}\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-shot secret key agreement toolkit for finite linear sources"};
  app.require_subcommand(1);

  CommonOpts analyze_opts, synth_opts, verify_opts, reduce_opts, oracle_opts;
  ska_config_init(&analyze_opts.cfg);
  ska_config_init(&synth_opts.cfg);
  ska_config_init(&verify_opts.cfg);
  ska_config_init(&reduce_opts.cfg);
  ska_config_init(&oracle_opts.cfg);

  std::string analyze_source, synth_source, verify_source, verify_scheme;
  std::string reduce_source, reduce_scheme, oracle_source;
  bool skip_rs = false;
  int cs_r = 0;
  std::vector<int> rate_vector;

  auto* analyze = app.add_subcommand("analyze", "Compute capacities and complexities");
  analyze->add_option("source", analyze_source, "Source file")->required();
  add_common(analyze, analyze_opts);
  analyze->add_flag("--skip-rs", skip_rs, "Skip the communication-complexity search")
      ->envname("SKA_SKIP_RS");

  auto* synthesize = app.add_subcommand("synthesize", "Emit a certified optimal scheme");
  synthesize->add_option("source", synth_source, "Source file")->required();
  add_common(synthesize, synth_opts);

  auto* verify = app.add_subcommand("verify", "Exhaustively verify a scheme");
  verify->add_option("source", verify_source, "Source file")->required();
  verify->add_option("scheme", verify_scheme, "Scheme file")->required();
  add_common(verify, verify_opts);

  auto* reduce = app.add_subcommand("reduce", "Strip unused base directions stepwise");
  reduce->add_option("source", reduce_source, "Source file")->required();
  reduce->add_option("scheme", reduce_scheme, "Scheme file")->required();
  add_common(reduce, reduce_opts);

  auto* oracle = app.add_subcommand("oracle", "Brute-force ground truth");
  oracle->require_subcommand(1);
  auto* gk = oracle->add_subcommand("gk", "Common-information key length");
  gk->add_option("source", oracle_source, "Source file")->required();
  auto* csr = oracle->add_subcommand("cs-of-r", "Best key length at a discussion budget");
  csr->add_option("source", oracle_source, "Source file")->required();
  csr->add_option("--r", cs_r, "Total discussion budget")->required();
  auto* check = oracle->add_subcommand("check-rate", "Test an omniscience rate vector");
  check->add_option("source", oracle_source, "Source file")->required();
  check->add_option("--vector", rate_vector, "Comma-separated per-user rates")
      ->required()
      ->delimiter(',');
  add_common(oracle, oracle_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  if (analyze->parsed()) {
    finalize(analyze_opts);
    analyze_opts.cfg.skip_rs = skip_rs ? 1 : 0;
    return run_analyze(analyze_source, analyze_opts);
  }
  if (synthesize->parsed()) {
    finalize(synth_opts);
    return run_synthesize(synth_source, synth_opts);
  }
  if (verify->parsed()) {
    finalize(verify_opts);
    return run_verify(verify_source, verify_scheme, verify_opts);
  }
  if (reduce->parsed()) {
    finalize(reduce_opts);
    return run_reduce(reduce_source, reduce_scheme, reduce_opts);
  }
  if (oracle->parsed()) {
    finalize(oracle_opts);
    if (gk->parsed()) return run_oracle_gk(oracle_source, oracle_opts);
    if (csr->parsed()) return run_oracle_cs_of_r(oracle_source, cs_r, oracle_opts);
    if (check->parsed()) return run_oracle_check_rate(oracle_source, rate_vector, oracle_opts);
  }
  std::cerr << "error: no command\n";
  return kExitBadInput;
}
