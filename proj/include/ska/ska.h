/*
 * libska — one-shot secret key agreement on finite linear sources.
 *
 * C interface over opaque handles. Every function returns a ska_status;
 * out-parameters are only valid on SKA_OK unless noted otherwise. Strings
 * returned through char** are heap-allocated and must be released with
 * ska_string_free. Handles are freed with their matching *_free function.
 * ska_last_error() returns a thread-local description of the most recent
 * failure.
 */

#ifndef SKA_SKA_H
#define SKA_SKA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ska_status {
  SKA_OK = 0,
  SKA_ERR_PARSE = 1,       /* malformed document */
  SKA_ERR_VALIDATION = 2,  /* well-formed but semantically invalid */
  SKA_ERR_DIMENSION = 3,   /* shapes or names do not line up */
  SKA_ERR_BUDGET = 4,      /* search budget exceeded */
  SKA_ERR_ENUM_CAP = 5,    /* enumeration cap exceeded */
  SKA_ERR_RATE_INFEASIBLE = 6,
  SKA_ERR_NOT_OMNISCIENT = 7,
  SKA_ERR_NO_WITNESS = 8,
  SKA_ERR_SYNTHESIS = 9,
  SKA_ERR_VERIFICATION = 10, /* a synthesized or input scheme failed checks */
  SKA_ERR_INTERNAL = 11,
  SKA_ERR_IO = 12,
  SKA_ERR_NULL_ARG = 13
} ska_status;

typedef struct ska_source ska_source;
typedef struct ska_scheme ska_scheme;
typedef struct ska_analysis ska_analysis;
typedef struct ska_verification ska_verification;
typedef struct ska_reduction ska_reduction;

typedef struct ska_config {
  uint64_t seed;
  int workers;            /* 0 = one per hardware thread */
  int partition_cap;      /* max user count for the partition scan */
  int subspace_dim_cap;   /* max per-user dimension in the reduction search */
  uint64_t enum_cap;      /* max realizations enumerated per exhaustive scan */
  uint64_t candidate_cap; /* max work units in the oracle scheme search */
  int skip_rs;            /* nonzero: analysis skips the reduction search */
  int machine_format;     /* nonzero: render JSON instead of text */
} ska_config;

const char* ska_version(void);
void ska_config_init(ska_config* cfg);
const char* ska_last_error(void);
void ska_string_free(char* s);

/* ---- sources ---- */

ska_status ska_source_parse(const char* text, size_t len, ska_source** out);
ska_status ska_source_load(const char* path, ska_source** out);
void ska_source_free(ska_source* s);

int ska_source_field(const ska_source* s);
int ska_source_base_len(const ska_source* s);
int ska_source_user_count(const ska_source* s);
/* Borrowed pointer, valid while the handle lives. NULL if out of range. */
const char* ska_source_user_name(const ska_source* s, int user);
ska_status ska_source_render(const ska_source* s, char** out);
ska_status ska_source_digest(const ska_source* s, char** out);

/* ---- analysis ---- */

/*
 * Computes the zero-discussion capacity, the unconstrained capacity, the
 * omniscience complexity and (unless skipped) the communication complexity
 * with its reducing processors. On SKA_ERR_BUDGET a partial report flagged
 * incomplete is still stored in *out.
 */
ska_status ska_analyze(const ska_source* s, const ska_config* cfg, ska_analysis** out);
void ska_analysis_free(ska_analysis* a);

int ska_analysis_entropy(const ska_analysis* a);
int ska_analysis_cs_zero(const ska_analysis* a);
int ska_analysis_has_cs(const ska_analysis* a);
int ska_analysis_cs(const ska_analysis* a);
int ska_analysis_r_co(const ska_analysis* a);
/* Exact optimum of the partition bound before flooring. */
ska_status ska_analysis_lp_value(const ska_analysis* a, int64_t* num, int64_t* den);
/* 1 when the reduction search completed, 0 otherwise. */
int ska_analysis_has_rs(const ska_analysis* a);
int ska_analysis_r_s(const ska_analysis* a);
int ska_analysis_incomplete(const ska_analysis* a);
ska_status ska_analysis_render(const ska_analysis* a, const ska_config* cfg, char** out);

/* ---- schemes ---- */

ska_status ska_scheme_parse(const char* text, size_t len, ska_scheme** out);
ska_status ska_scheme_load(const char* path, ska_scheme** out);
void ska_scheme_free(ska_scheme* s);
int ska_scheme_key_length(const ska_scheme* s);
int ska_scheme_total_discussion(const ska_scheme* s);
ska_status ska_scheme_render(const ska_scheme* s, char** out);

/*
 * Synthesizes a scheme with discussion length r_S and key length c_S, then
 * certifies it by exhaustive verification before returning it. Never returns
 * an uncertified scheme.
 */
ska_status ska_synthesize(const ska_source* s, const ska_config* cfg, ska_scheme** out);

/* ---- verification ---- */

ska_status ska_verify(const ska_source* s, const ska_scheme* scheme,
                      const ska_config* cfg, ska_verification** out);
void ska_verification_free(ska_verification* v);
int ska_verification_certified(const ska_verification* v);
int ska_verification_user_recoverable(const ska_verification* v, int user);
int ska_verification_user_omniscient(const ska_verification* v, int user);
uint64_t ska_verification_realizations(const ska_verification* v);
ska_status ska_verification_render(const ska_verification* v, const ska_config* cfg,
                                   char** out);

/* ---- reduction ---- */

/*
 * Verifies the scheme, then repeatedly strips base directions that the
 * discussion never uses until the discussion is omniscient for every user.
 * Each intermediate source is retained and can be fetched by step index.
 */
ska_status ska_reduce(const ska_source* s, const ska_scheme* scheme,
                      const ska_config* cfg, ska_reduction** out);
void ska_reduction_free(ska_reduction* r);
int ska_reduction_step_count(const ska_reduction* r);
int ska_reduction_step_entropy(const ska_reduction* r, int step);
int ska_reduction_final_r_co(const ska_reduction* r);
ska_status ska_reduction_step_source(const ska_reduction* r, int step, char** out);
ska_status ska_reduction_render(const ska_reduction* r, const ska_config* cfg,
                                char** out);

/* ---- brute-force oracle ---- */

ska_status ska_oracle_gk(const ska_source* s, const ska_config* cfg, int* out);
ska_status ska_oracle_cs_of_r(const ska_source* s, const ska_config* cfg, int r_total,
                              int* out);
/*
 * Checks the omniscience rate region. *feasible is 1/0; when infeasible,
 * *witness receives a comma-separated list of user names of the most
 * violated subset (free with ska_string_free).
 */
ska_status ska_oracle_check_rate(const ska_source* s, const ska_config* cfg,
                                 const int* rates, int count, int* feasible,
                                 char** witness);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SKA_SKA_H */
