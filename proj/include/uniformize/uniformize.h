#ifndef UNIFORMIZE_H
#define UNIFORMIZE_H

#include <stddef.h>
#include <stdint.h>

#if defined(UZ_BUILDING_LIBRARY)
#define UZ_API __attribute__((visibility("default")))
#else
#define UZ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes. */
typedef enum uz_status {
  UZ_OK = 0,
  UZ_ERR_CONTRACT = 2,  /* bad configuration, malformed input, precondition */
  UZ_ERR_NUMERICAL = 3  /* solver, period or winding failure */
} uz_status;

typedef struct uz_domain uz_domain;
typedef struct uz_result uz_result;

UZ_API const char* uz_version(void);

/* Message and kind (e.g. "clearance_violation") of the last failure on this
   thread. Empty strings after a successful call. */
UZ_API const char* uz_last_error(void);
UZ_API const char* uz_last_error_kind(void);

/* Strings handed out through char** parameters. */
UZ_API void uz_string_free(char* s);

/* Domain spec JSON: {"level": {"expr", "params"}, "a", "x0", "h", "box"}. */
UZ_API uz_status uz_domain_create(const char* spec_json, uz_domain** out);
UZ_API void uz_domain_free(uz_domain* d);
/* Grid metadata, level used, Euler characteristic, boundary loop count. */
UZ_API uz_status uz_domain_info(const uz_domain* d, char** json_out);
UZ_API size_t uz_domain_interior_count(const uz_domain* d);
/* mask.pgm and loops.csv into dir. */
UZ_API uz_status uz_domain_export(const uz_domain* d, const char* dir);

/* command: dirichlet, green, map, exhaust, verify. config_json is a run
   configuration; relative paths inside it resolve against base_dir (may be
   NULL for the working directory). */
UZ_API uz_status uz_run(const char* command, const char* config_json, const char* base_dir, uz_result** out);

UZ_API void uz_result_free(uz_result* r);
/* 1 when every check of the command held. */
UZ_API int uz_result_passed(const uz_result* r);
/* Summary JSON, owned by the result. */
UZ_API const char* uz_result_report(const uz_result* r);
UZ_API size_t uz_result_artifact_count(const uz_result* r);
UZ_API const char* uz_result_artifact_name(const uz_result* r, size_t i);
UZ_API const char* uz_result_artifact_data(const uz_result* r, size_t i, size_t* size);
/* Writes every artifact atomically (temp file + rename). */
UZ_API uz_status uz_result_write(const uz_result* r, const char* dir);

/* JSON array of suite names. */
UZ_API uz_status uz_verify_suites(char** json_out);

#ifdef __cplusplus
}
#endif

#endif
