/* C interface to the CHNS optimal-control lab. */
#ifndef CHNS_CHNS_H
#define CHNS_CHNS_H

#include <stdint.h>

#if defined(_WIN32)
#define CHNS_API __declspec(dllexport)
#else
#define CHNS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct chns_session chns_session;

typedef enum chns_status {
  CHNS_OK = 0,
  CHNS_E_CONFIG = 1,
  CHNS_E_NUMERIC = 2,
  CHNS_E_AUDIT_FAILED = 3,
  CHNS_E_IO = 4,
  CHNS_E_INVALID_ARGUMENT = 5,
  CHNS_E_INTERNAL = 6
} chns_status;

CHNS_API const char* chns_version(void);
CHNS_API const char* chns_status_string(chns_status status);

/* Message of the last failure on this thread (empty when none). */
CHNS_API const char* chns_last_error(void);

/* Creates a session from a JSON config document or a file holding one (a run
 * manifest is accepted as well). On failure *out is set to NULL. */
CHNS_API chns_status chns_session_create(const char* config_json, chns_session** out);
CHNS_API chns_status chns_session_create_from_file(const char* path, chns_session** out);
CHNS_API void chns_session_destroy(chns_session* session);

/* Replaces both the initial-condition and the optimizer seed. */
CHNS_API chns_status chns_session_set_seed(chns_session* session, uint64_t seed);
CHNS_API chns_status chns_session_set_output_dir(chns_session* session, const char* dir);
/* 16 hex digits identifying the effective config. */
CHNS_API const char* chns_session_config_hash(const chns_session* session);
/* One-line summary of the last command run on the session. */
CHNS_API const char* chns_session_summary(const chns_session* session);

/* Batch commands. Outputs and manifest.json go to the session output dir.
 * CHNS_E_AUDIT_FAILED means the command completed but its check failed. */
CHNS_API chns_status chns_simulate(chns_session* session);
CHNS_API chns_status chns_optimize(chns_session* session);
/* t_mid is ignored when use_t_mid is 0 (the window midpoint is used). */
CHNS_API chns_status chns_dpp_check(chns_session* session, int use_t_mid, double t_mid);
CHNS_API chns_status chns_hjb_check(chns_session* session);
CHNS_API chns_status chns_audit(chns_session* session, const char* name);

/* Closed-form inf over the R-ball of (U, p) + |U|^2/2 as a function of |p|. */
CHNS_API chns_status chns_hamiltonian_closed(double p_norm, double radius, double* out);

#ifdef __cplusplus
}
#endif

#endif
