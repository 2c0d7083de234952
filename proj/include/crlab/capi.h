#pragma once

/** @file capi.h
 *  Stable C interface to the verification runner.  All state lives behind
 *  the opaque crlab_run handle; strings returned by accessors are owned by
 *  the handle and stay valid until crlab_run_free.  Every entry point is
 *  safe to call from multiple threads as long as each handle is confined to
 *  one thread; the error string is thread-local.
 */

#ifdef __cplusplus
extern "C" {
#endif

/** Status codes.  They mirror the process exit contract of the CLI. */
enum crlab_status {
  CRLAB_OK = 0,           /**< run executed, every check passed */
  CRLAB_E_CHECK = 1,      /**< run executed, at least one check failed */
  CRLAB_E_CONFIG = 2,     /**< configuration rejected or run not executable */
  CRLAB_E_CAPABILITY = 3, /**< unsupported capability combination */
  CRLAB_E_INTERNAL = 4    /**< unexpected internal failure */
};

/** A completed verification run (opaque). */
typedef struct crlab_run crlab_run;

/** Library version string, e.g. "1.0.0". */
const char* crlab_version(void);

/** Execute a run described by a JSON configuration object.
 *
 *  Recognized keys (all optional except "command"): command, family, n,
 *  param, lo, hi, steps, points, seed, h1, h2, richardson, tol_bitension,
 *  tol_condition, tol_defect, quad_nodes, format, out.
 *
 *  On CRLAB_OK and CRLAB_E_CHECK the run completed: *out receives a handle
 *  the caller must release with crlab_run_free.  On any other status *out is
 *  set to NULL and crlab_last_error() describes the failure.
 */
int crlab_run_json(const char* config_json, crlab_run** out);

/** 1 when every check of the run passed, 0 otherwise. */
int crlab_run_all_passed(const crlab_run* run);

/** Pass/fail summary line, e.g. "PASS 13/13". */
const char* crlab_run_summary(const crlab_run* run);

/** Deterministic JSON report (byte-identical for identical configurations). */
const char* crlab_run_report_json(const crlab_run* run);

/** Deterministic CSV report (scan row table or check table). */
const char* crlab_run_report_csv(const crlab_run* run);

/** Release a handle (NULL is a no-op). */
void crlab_run_free(crlab_run* run);

/** Description of the most recent failure on this thread ("" when none). */
const char* crlab_last_error(void);

#ifdef __cplusplus
}
#endif
