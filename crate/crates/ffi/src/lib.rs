//! C ABI for the corrbus simulation library.
//!
//! Conventions:
//! - Every fallible function returns a [`CorrbusStatus`]; `CORRBUS_STATUS_OK`
//!   is zero. On failure, a human-readable message is stored in thread-local
//!   state and retrievable with `corrbus_last_error`.
//! - Handles (`CorrbusConfig`, `CorrbusRun`) are opaque; create them with the
//!   `*_parse`/`*_execute` constructors and release them with the matching
//!   `*_free`. Passing null to a `*_free` is a no-op.
//! - All pointers must be valid for the duration of the call; output rows
//!   are plain structs of doubles, safe to copy anywhere.
//!
//! The generated header lives at `include/corrbus.h`.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use corrbus::cli::{self, RunConfig};
use corrbus::dynamics::{evolve_and_sample, EvolutionDiagnostics};
use corrbus::measures::{sample_all, CorrelationSample, MeasuredQubit};
use corrbus::model::build_generator;
use corrbus::qlinalg::CMatrix;
use corrbus::Error;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrbusStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Config text, state data, or parameters were rejected.
    InvalidInput = 2,
    /// The computation aborted (trace drift, non-finite values, failed
    /// eigendecomposition).
    Numerical = 3,
    /// Filesystem failure while writing outputs.
    Io = 4,
    /// A panic was caught at the boundary; state may be inconsistent.
    Internal = 5,
}

/// Opaque parsed run configuration.
pub struct CorrbusConfig {
    inner: RunConfig,
}

/// Opaque completed run: sample rows plus conservation diagnostics.
pub struct CorrbusRun {
    samples: Vec<CorrelationSample>,
    diagnostics: EvolutionDiagnostics,
}

/// One sample row; all angles in radians, times in ns.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CorrbusSampleRow {
    pub t_ns: f64,
    pub coherence_d: f64,
    /// Discord clamped at zero (the reported value).
    pub discord_q: f64,
    /// Unclamped mutual_i - classical_c.
    pub discord_raw: f64,
    pub classical_c: f64,
    pub mutual_i: f64,
    pub concurrence: f64,
    pub eof: f64,
    pub purity: f64,
    pub trace_err: f64,
    pub argmax_theta: f64,
    pub argmax_phi: f64,
    pub coh_a: f64,
    pub coh_b: f64,
    /// 1 when the measurement optimizer converged at this sample.
    pub optimizer_converged: u8,
}

impl From<&CorrelationSample> for CorrbusSampleRow {
    fn from(s: &CorrelationSample) -> Self {
        Self {
            t_ns: s.t_ns,
            coherence_d: s.coherence_d,
            discord_q: s.discord_q,
            discord_raw: s.discord_raw,
            classical_c: s.classical_c,
            mutual_i: s.mutual_i,
            concurrence: s.concurrence,
            eof: s.eof,
            purity: s.purity,
            trace_err: s.trace_err,
            argmax_theta: s.argmax_theta,
            argmax_phi: s.argmax_phi,
            coh_a: s.coh_a,
            coh_b: s.coh_b,
            optimizer_converged: u8::from(s.optimizer_converged),
        }
    }
}

thread_local! {
    static LAST_ERROR: std::cell::RefCell<CString> =
        std::cell::RefCell::new(CString::new("").unwrap());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> CorrbusStatus {
    match err {
        Error::Io(_) => CorrbusStatus::Io,
        Error::TraceDrift { .. }
        | Error::NonFinite(_)
        | Error::EigNoConvergence(_)
        | Error::NegativeEigenvalue(..)
        | Error::NotHermitian { .. } => CorrbusStatus::Numerical,
        _ => CorrbusStatus::InvalidInput,
    }
}

fn fail(err: &Error) -> CorrbusStatus {
    set_last_error(&err.to_string());
    status_of(err)
}

fn guard(body: impl FnOnce() -> CorrbusStatus) -> CorrbusStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("panic caught at the C boundary");
            CorrbusStatus::Internal
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn corrbus_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy the last error message of this thread into `buf` (truncated to
/// `cap - 1` bytes, always NUL-terminated when `cap > 0`). Returns the full
/// message length in bytes, excluding the terminator.
///
/// # Safety
/// `buf` must point to at least `cap` writable bytes, or be null (then only
/// the length is returned).
#[no_mangle]
pub unsafe extern "C" fn corrbus_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Parse a NUL-terminated JSON configuration document into a config handle.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be a valid
/// pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn corrbus_config_parse(
    json: *const c_char,
    out: *mut *mut CorrbusConfig,
) -> CorrbusStatus {
    if json.is_null() || out.is_null() {
        set_last_error("null argument to corrbus_config_parse");
        return CorrbusStatus::NullArgument;
    }
    *out = std::ptr::null_mut();
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_last_error("config text is not valid UTF-8");
            return CorrbusStatus::InvalidInput;
        }
    };
    guard(|| match cli::parse_config(text) {
        Ok(cfg) => {
            *out = Box::into_raw(Box::new(CorrbusConfig { inner: cfg }));
            CorrbusStatus::Ok
        }
        Err(e) => fail(&e),
    })
}

/// Release a config handle (null is a no-op).
///
/// # Safety
/// `cfg` must be a handle from `corrbus_config_parse`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn corrbus_config_free(cfg: *mut CorrbusConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

fn execute_in_memory(cfg: &RunConfig) -> corrbus::Result<CorrbusRun> {
    cfg.validate()?;
    let layout = cfg.params.layout();
    let generator = build_generator(&cfg.params)?;
    let rho0 = cfg.scenario().initial_state(&layout, cfg.allow_empty_resonator)?;
    let side = cfg.measure_side;
    let (samples, diagnostics) =
        evolve_and_sample(&generator, &rho0, &cfg.grid, &layout, |t, rho| {
            sample_all(rho, &layout, t, side)
        })?;
    Ok(CorrbusRun {
        samples,
        diagnostics,
    })
}

/// Run the configured scenario in memory (ignores `output_path`); the
/// resulting handle exposes rows and diagnostics.
///
/// # Safety
/// `cfg` must be a live config handle; `out` must be valid to write.
#[no_mangle]
pub unsafe extern "C" fn corrbus_run_execute(
    cfg: *const CorrbusConfig,
    out: *mut *mut CorrbusRun,
) -> CorrbusStatus {
    if cfg.is_null() || out.is_null() {
        set_last_error("null argument to corrbus_run_execute");
        return CorrbusStatus::NullArgument;
    }
    *out = std::ptr::null_mut();
    let config = &(*cfg).inner;
    guard(|| match execute_in_memory(config) {
        Ok(run) => {
            *out = Box::into_raw(Box::new(run));
            CorrbusStatus::Ok
        }
        Err(e) => fail(&e),
    })
}

/// Run the configured scenario and write the output file plus diagnostics
/// sidecar exactly as the `corrbus run` subcommand does.
///
/// # Safety
/// `cfg` must be a live config handle.
#[no_mangle]
pub unsafe extern "C" fn corrbus_run_write_outputs(cfg: *const CorrbusConfig) -> CorrbusStatus {
    if cfg.is_null() {
        set_last_error("null argument to corrbus_run_write_outputs");
        return CorrbusStatus::NullArgument;
    }
    let config = &(*cfg).inner;
    guard(|| match cli::run_scenario(config) {
        Ok(_) => CorrbusStatus::Ok,
        Err(e) => fail(&e),
    })
}

/// Number of sample rows in a completed run.
///
/// # Safety
/// `run` must be a live run handle (null returns 0).
#[no_mangle]
pub unsafe extern "C" fn corrbus_run_len(run: *const CorrbusRun) -> usize {
    if run.is_null() {
        return 0;
    }
    let run = &*run;
    run.samples.len()
}

/// Copy row `index` into `out`.
///
/// # Safety
/// `run` must be a live run handle and `out` valid to write.
#[no_mangle]
pub unsafe extern "C" fn corrbus_run_row(
    run: *const CorrbusRun,
    index: usize,
    out: *mut CorrbusSampleRow,
) -> CorrbusStatus {
    if run.is_null() || out.is_null() {
        set_last_error("null argument to corrbus_run_row");
        return CorrbusStatus::NullArgument;
    }
    let run = &*run;
    match run.samples.get(index) {
        Some(sample) => {
            *out = sample.into();
            CorrbusStatus::Ok
        }
        None => {
            set_last_error("row index out of range");
            CorrbusStatus::InvalidInput
        }
    }
}

/// Copy the run diagnostics into the three output slots (any may be null).
///
/// # Safety
/// `run` must be a live run handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn corrbus_run_diagnostics(
    run: *const CorrbusRun,
    max_trace_error: *mut f64,
    min_eigenvalue: *mut f64,
    max_cutoff_population: *mut f64,
) -> CorrbusStatus {
    if run.is_null() {
        set_last_error("null argument to corrbus_run_diagnostics");
        return CorrbusStatus::NullArgument;
    }
    let d = (*run).diagnostics;
    if !max_trace_error.is_null() {
        *max_trace_error = d.max_trace_error;
    }
    if !min_eigenvalue.is_null() {
        *min_eigenvalue = d.min_eigenvalue;
    }
    if !max_cutoff_population.is_null() {
        *max_cutoff_population = d.max_cutoff_population;
    }
    CorrbusStatus::Ok
}

/// Release a run handle (null is a no-op).
///
/// # Safety
/// `run` must be a handle from `corrbus_run_execute`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn corrbus_run_free(run: *mut CorrbusRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Compute every measure of a caller-supplied two-qubit density matrix.
///
/// `rho` points to 32 doubles: the 4×4 matrix in row-major order with
/// interleaved (re, im) pairs, basis |00⟩,|01⟩,|10⟩,|11⟩. The measurement
/// optimization acts on qubit B. The row's `t_ns`, `purity`, and `trace_err`
/// refer to the supplied matrix itself.
///
/// # Safety
/// `rho` must point to 32 readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn corrbus_two_qubit_measures(
    rho: *const f64,
    out: *mut CorrbusSampleRow,
) -> CorrbusStatus {
    if rho.is_null() || out.is_null() {
        set_last_error("null argument to corrbus_two_qubit_measures");
        return CorrbusStatus::NullArgument;
    }
    let raw = std::slice::from_raw_parts(rho, 32);
    guard(|| {
        let entries: Vec<num_complex::Complex64> = raw
            .chunks_exact(2)
            .map(|pair| num_complex::Complex64::new(pair[0], pair[1]))
            .collect();
        let matrix = match CMatrix::from_vec(4, 4, entries) {
            Ok(m) => m,
            Err(e) => return fail(&e),
        };
        match two_qubit_measures_impl(&matrix) {
            Ok(row) => {
                *out = row;
                CorrbusStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

fn two_qubit_measures_impl(rho: &CMatrix) -> corrbus::Result<CorrbusSampleRow> {
    use corrbus::measures as m;
    use corrbus::qlinalg::partial_trace;

    let mutual_i = m::mutual_information(rho)?;
    let opt = m::classical_correlation_on(rho, MeasuredQubit::B)?;
    let discord_raw = mutual_i - opt.value;
    let conc = m::concurrence(rho)?;
    let rho_a = partial_trace(rho, &[2, 2], &[0])?;
    let rho_b = partial_trace(rho, &[2, 2], &[1])?;
    let trace_err = (rho.trace() - num_complex::Complex64::ONE).norm();
    let purity: f64 = rho.data().iter().map(|z| z.norm_sqr()).sum();

    Ok(CorrbusSampleRow {
        t_ns: 0.0,
        coherence_d: m::l1_coherence(rho),
        discord_q: discord_raw.max(0.0),
        discord_raw,
        classical_c: opt.value,
        mutual_i,
        concurrence: conc,
        eof: m::eof_from_concurrence(conc),
        purity,
        trace_err,
        argmax_theta: opt.theta,
        argmax_phi: opt.phi,
        coh_a: m::l1_coherence(&rho_a),
        coh_b: m::l1_coherence(&rho_b),
        optimizer_converged: u8::from(opt.converged),
    })
}
