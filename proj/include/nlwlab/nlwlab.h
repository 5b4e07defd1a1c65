#ifndef NLWLAB_NLWLAB_H
#define NLWLAB_NLWLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(NLW_BUILDING_LIBRARY)
#define NLW_API __attribute__((visibility("default")))
#else
#define NLW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nlw_status {
  NLW_OK = 0,
  NLW_ERR_INVALID_ARGUMENT = 1,
  NLW_ERR_VALIDATION = 2,
  NLW_ERR_NUMERICAL = 3,
  NLW_ERR_UNCONVERGED = 4,
  NLW_ERR_DOMAIN = 5,
  NLW_ERR_RANGE = 6,
  NLW_ERR_IO = 7,
  NLW_ERR_CONDITIONING = 8,
  NLW_ERR_REFINEMENT = 9,
  NLW_ERR_INTERNAL = 10
} nlw_status;

/* Message of the last failing call on this thread; "" if none. Valid until the next call. */
NLW_API const char* nlw_last_error(void);
NLW_API const char* nlw_status_name(nlw_status status);
NLW_API const char* nlw_version(void);

/* Strings are returned through (buf, len): up to len-1 bytes plus a terminator are written and
   *needed (if non-NULL) receives the full length + 1. A short buffer gives NLW_ERR_RANGE. */

/* ---- ground state ------------------------------------------------------------------------ */

typedef struct nlw_grid nlw_grid;

NLW_API nlw_status nlw_grid_create(int N, double h, double r_max, nlw_grid** out);
NLW_API void nlw_grid_destroy(nlw_grid* grid);
NLW_API nlw_status nlw_grid_size(const nlw_grid* grid, size_t* out);
NLW_API nlw_status nlw_grid_nodes(const nlw_grid* grid, double* out, size_t len);

/* W(r) and ΛW(r) for odd N >= 3; either output may be NULL. */
NLW_API nlw_status nlw_ground_state(int N, double r, double* W, double* LambdaW);

typedef struct nlw_constants {
  int N;
  double norm_LambdaW_L2_sq;
  double norm_gradW_L2_sq;
  double norm_gradLambdaW_L2_sq;
  double kappa0;
  double kappa1;
  double kappa1_prime;
  double kappa2;
  double energy_W;
  double interaction_integral;
  double potential_integral;
} nlw_constants;

/* Grid quadrature (with tail correction) and grid-free reference values; N >= 5. */
NLW_API nlw_status nlw_constants_on_grid(const nlw_grid* grid, nlw_constants* out);
NLW_API nlw_status nlw_constants_reference(int N, nlw_constants* out);

/* ---- experiment configuration ------------------------------------------------------------ */

typedef struct nlw_config nlw_config;

NLW_API nlw_status nlw_config_create(nlw_config** out);
NLW_API nlw_status nlw_config_parse(const char* text, nlw_config** out);
NLW_API nlw_status nlw_config_load(const char* path, nlw_config** out);
NLW_API void nlw_config_destroy(nlw_config* cfg);
NLW_API nlw_status nlw_config_set(nlw_config* cfg, const char* key, const char* value);
/* NLW_ERR_INVALID_ARGUMENT if the key is absent. */
NLW_API nlw_status nlw_config_get(const nlw_config* cfg, const char* key, char* buf, size_t len, size_t* needed);
NLW_API nlw_status nlw_config_canonical(const nlw_config* cfg, char* buf, size_t len, size_t* needed);
/* 64 hex digits + terminator. */
NLW_API nlw_status nlw_config_hash(const nlw_config* cfg, char out[65]);
/* Issues separated by '\n'; *count receives their number. NLW_OK even when issues exist. */
NLW_API nlw_status nlw_config_validate(const nlw_config* cfg, size_t* count, char* buf, size_t len, size_t* needed);

/* ---- runs -------------------------------------------------------------------------------- */

typedef struct nlw_manifest nlw_manifest;

/* On NLW_OK or NLW_ERR_UNCONVERGED the outputs exist and *out holds the manifest;
   on any other status nothing is left in out_dir and *out is NULL. */
NLW_API nlw_status nlw_run(const nlw_config* cfg, const char* out_dir, nlw_manifest** out);
NLW_API nlw_status nlw_manifest_read(const char* run_dir, nlw_manifest** out);
NLW_API void nlw_manifest_destroy(nlw_manifest* m);
NLW_API nlw_status nlw_manifest_status(const nlw_manifest* m);
NLW_API nlw_status nlw_manifest_config_hash(const nlw_manifest* m, char out[65]);
NLW_API nlw_status nlw_manifest_kind(const nlw_manifest* m, char* buf, size_t len, size_t* needed);
NLW_API nlw_status nlw_manifest_file_count(const nlw_manifest* m, size_t* out);
NLW_API nlw_status nlw_manifest_file(const nlw_manifest* m, size_t index, char* name, size_t name_len,
                                     char sha256[65]);

/* Re-runs run_dir into out_dir; *match is 1 when every output hash agrees. */
NLW_API nlw_status nlw_replay(const char* run_dir, const char* out_dir, int* match, nlw_manifest** out);

/* One preset per line: "name<TAB>keys<TAB>description". */
NLW_API nlw_status nlw_list_presets(char* buf, size_t len, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif
