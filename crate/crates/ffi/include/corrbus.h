#ifndef CORRBUS_H
#define CORRBUS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum {
  CORRBUS_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  CORRBUS_STATUS_NULL_ARGUMENT = 1,
  /**
   * Config text, state data, or parameters were rejected.
   */
  CORRBUS_STATUS_INVALID_INPUT = 2,
  /**
   * The computation aborted (trace drift, non-finite values, failed
   * eigendecomposition).
   */
  CORRBUS_STATUS_NUMERICAL = 3,
  /**
   * Filesystem failure while writing outputs.
   */
  CORRBUS_STATUS_IO = 4,
  /**
   * A panic was caught at the boundary; state may be inconsistent.
   */
  CORRBUS_STATUS_INTERNAL = 5,
} CorrbusStatus;

/**
 * Opaque parsed run configuration.
 */
typedef struct CorrbusConfig CorrbusConfig;

/**
 * Opaque completed run: sample rows plus conservation diagnostics.
 */
typedef struct CorrbusRun CorrbusRun;

/**
 * One sample row; all angles in radians, times in ns.
 */
typedef struct {
  double t_ns;
  double coherence_d;
  /**
   * Discord clamped at zero (the reported value).
   */
  double discord_q;
  /**
   * Unclamped mutual_i - classical_c.
   */
  double discord_raw;
  double classical_c;
  double mutual_i;
  double concurrence;
  double eof;
  double purity;
  double trace_err;
  double argmax_theta;
  double argmax_phi;
  double coh_a;
  double coh_b;
  /**
   * 1 when the measurement optimizer converged at this sample.
   */
  uint8_t optimizer_converged;
} CorrbusSampleRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *corrbus_version(void);

/**
 * Copy the last error message of this thread into `buf` (truncated to
 * `cap - 1` bytes, always NUL-terminated when `cap > 0`). Returns the full
 * message length in bytes, excluding the terminator.
 *
 * # Safety
 * `buf` must point to at least `cap` writable bytes, or be null (then only
 * the length is returned).
 */
size_t corrbus_last_error(char *buf, size_t cap);

/**
 * Parse a NUL-terminated JSON configuration document into a config handle.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` must be a valid
 * pointer to receive the handle.
 */
CorrbusStatus corrbus_config_parse(const char *json, CorrbusConfig **out);

/**
 * Release a config handle (null is a no-op).
 *
 * # Safety
 * `cfg` must be a handle from `corrbus_config_parse`, not yet freed.
 */
void corrbus_config_free(CorrbusConfig *cfg);

/**
 * Run the configured scenario in memory (ignores `output_path`); the
 * resulting handle exposes rows and diagnostics.
 *
 * # Safety
 * `cfg` must be a live config handle; `out` must be valid to write.
 */
CorrbusStatus corrbus_run_execute(const CorrbusConfig *cfg, CorrbusRun **out);

/**
 * Run the configured scenario and write the output file plus diagnostics
 * sidecar exactly as the `corrbus run` subcommand does.
 *
 * # Safety
 * `cfg` must be a live config handle.
 */
CorrbusStatus corrbus_run_write_outputs(const CorrbusConfig *cfg);

/**
 * Number of sample rows in a completed run.
 *
 * # Safety
 * `run` must be a live run handle (null returns 0).
 */
size_t corrbus_run_len(const CorrbusRun *run);

/**
 * Copy row `index` into `out`.
 *
 * # Safety
 * `run` must be a live run handle and `out` valid to write.
 */
CorrbusStatus corrbus_run_row(const CorrbusRun *run, size_t index, CorrbusSampleRow *out);

/**
 * Copy the run diagnostics into the three output slots (any may be null).
 *
 * # Safety
 * `run` must be a live run handle; non-null outputs must be writable.
 */
CorrbusStatus corrbus_run_diagnostics(const CorrbusRun *run,
                                      double *max_trace_error,
                                      double *min_eigenvalue,
                                      double *max_cutoff_population);

/**
 * Release a run handle (null is a no-op).
 *
 * # Safety
 * `run` must be a handle from `corrbus_run_execute`, not yet freed.
 */
void corrbus_run_free(CorrbusRun *run);

/**
 * Compute every measure of a caller-supplied two-qubit density matrix.
 *
 * `rho` points to 32 doubles: the 4×4 matrix in row-major order with
 * interleaved (re, im) pairs, basis |00⟩,|01⟩,|10⟩,|11⟩. The measurement
 * optimization acts on qubit B. The row's `t_ns`, `purity`, and `trace_err`
 * refer to the supplied matrix itself.
 *
 * # Safety
 * `rho` must point to 32 readable doubles and `out` must be writable.
 */
CorrbusStatus corrbus_two_qubit_measures(const double *rho, CorrbusSampleRow *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CORRBUS_H */
