//! Batch front end: execute scenarios and sweeps, write CSV / JSON-lines
//! output plus a diagnostics sidecar, and drive the validation suite.
//!
//! File conventions (all documented in the README):
//! - results: the configured `output_path`, CSV (RFC-4180-style, LF line
//!   endings, 17 significant digits) or JSON lines;
//! - diagnostics sidecar: `<output_path>.diag.json`;
//! - sweep outputs: `<stem>__<key>_<value>.<ext>` next to the base path;
//! - sweep manifest: `<output_path>.sweep.json`.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::dynamics::{evolve_and_sample, EvolutionDiagnostics};
use crate::measures::{sample_all, CorrelationSample};
use crate::model::build_generator;
use crate::validation::{self, CriterionOutcome, ValidationOptions};
use crate::{Error, Result};

mod config;

pub use config::{apply_sweep_value, parse_config, OutputFormat, RunConfig, SWEEPABLE_KEYS};

/// Population of the top Fock level above which a truncation warning is
/// attached to the run.
pub const CUTOFF_WARN_THRESHOLD: f64 = 1e-4;

/// Outcome of one scenario run.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub rows: usize,
    pub diagnostics: EvolutionDiagnostics,
    pub output_path: PathBuf,
    pub diagnostics_path: PathBuf,
    /// Samples where the measurement optimizer hit its round cap.
    pub nonconverged_samples: usize,
    /// True when the top Fock level exceeded [`CUTOFF_WARN_THRESHOLD`].
    pub cutoff_warning: bool,
}

fn format_field(x: f64) -> String {
    // 17 significant digits: one leading digit plus 16 decimals.
    format!("{x:.16e}")
}

fn write_csv(path: &Path, samples: &[CorrelationSample], marginals: bool) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    let mut header = "t_ns,coherence_D,discord_Q,classical_C,mutual_I,concurrence,eof,purity,\
                      trace_err,argmax_theta,argmax_phi"
        .to_string();
    if marginals {
        header.push_str(",coh_A,coh_B");
    }
    out.write_all(header.as_bytes())?;
    out.write_all(b"\n")?;
    for s in samples {
        let mut fields = vec![
            format_field(s.t_ns),
            format_field(s.coherence_d),
            format_field(s.discord_q),
            format_field(s.classical_c),
            format_field(s.mutual_i),
            format_field(s.concurrence),
            format_field(s.eof),
            format_field(s.purity),
            format_field(s.trace_err),
            format_field(s.argmax_theta),
            format_field(s.argmax_phi),
        ];
        if marginals {
            fields.push(format_field(s.coh_a));
            fields.push(format_field(s.coh_b));
        }
        out.write_all(fields.join(",").as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

fn write_json_lines(path: &Path, samples: &[CorrelationSample]) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    for s in samples {
        let line = serde_json::to_string(s).map_err(|e| Error::Config(e.to_string()))?;
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Sidecar<'a> {
    code_version: &'static str,
    config: &'a RunConfig,
    rows: usize,
    diagnostics: EvolutionDiagnostics,
    nonconverged_samples: usize,
    min_discord_raw: f64,
    cutoff_warning: bool,
}

/// Execute one scenario and write the results plus the diagnostics sidecar.
pub fn run_scenario(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let scenario = cfg.scenario();
    let layout = cfg.params.layout();
    let generator = build_generator(&cfg.params)?;
    let rho0 = scenario.initial_state(&layout, cfg.allow_empty_resonator)?;

    let side = cfg.measure_side;
    let (samples, diagnostics) =
        evolve_and_sample(&generator, &rho0, &cfg.grid, &layout, |t, rho| {
            sample_all(rho, &layout, t, side)
        })?;

    match cfg.output_format {
        OutputFormat::Csv => write_csv(&cfg.output_path, &samples, cfg.emit_marginal_coherences)?,
        OutputFormat::JsonLines => write_json_lines(&cfg.output_path, &samples)?,
    }

    let nonconverged_samples = samples.iter().filter(|s| !s.optimizer_converged).count();
    let min_discord_raw = samples
        .iter()
        .map(|s| s.discord_raw)
        .fold(f64::INFINITY, f64::min);
    let cutoff_warning = diagnostics.max_cutoff_population > CUTOFF_WARN_THRESHOLD;
    if cutoff_warning {
        eprintln!(
            "warning: top Fock level population reached {:.2e} (> {CUTOFF_WARN_THRESHOLD:.0e}); \
             results may be truncation-limited, consider raising n_max",
            diagnostics.max_cutoff_population
        );
    }

    let diagnostics_path = sidecar_path(&cfg.output_path);
    let sidecar = Sidecar {
        code_version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        rows: samples.len(),
        diagnostics,
        nonconverged_samples,
        min_discord_raw,
        cutoff_warning,
    };
    let body =
        serde_json::to_string_pretty(&sidecar).map_err(|e| Error::Config(e.to_string()))?;
    fs::write(&diagnostics_path, body + "\n")?;

    Ok(RunSummary {
        rows: samples.len(),
        diagnostics,
        output_path: cfg.output_path.clone(),
        diagnostics_path,
        nonconverged_samples,
        cutoff_warning,
    })
}

fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".diag.json");
    output.with_file_name(name)
}

fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".sweep.json");
    output.with_file_name(name)
}

/// Per-item output path: `<stem>__<key>_<value>.<ext>`.
fn sweep_output_path(base: &Path, key: &str, token: &str) -> PathBuf {
    let sanitized: String = token
        .chars()
        .map(|ch| {
            if ch.is_ascii_alphanumeric() || matches!(ch, '.' | '+' | '-' | '_') {
                ch
            } else {
                '-'
            }
        })
        .collect();
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep".to_string());
    let name = match base.extension() {
        Some(ext) => format!("{stem}__{key}_{sanitized}.{}", ext.to_string_lossy()),
        None => format!("{stem}__{key}_{sanitized}"),
    };
    base.with_file_name(name)
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepItem {
    pub value: String,
    pub output_path: PathBuf,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub key: String,
    pub items: Vec<SweepItem>,
    pub all_ok: bool,
    #[serde(skip)]
    pub manifest_path: PathBuf,
    /// Worst per-item exit code (0 when everything succeeded).
    #[serde(skip)]
    pub exit_code: i32,
}

/// Run one scenario per value, continuing past individual failures; the
/// manifest records every item's outcome.
pub fn run_sweep(cfg: &RunConfig, key: &str, values: &[String]) -> Result<SweepSummary> {
    let values: Vec<&String> = values.iter().filter(|t| !t.trim().is_empty()).collect();
    if values.is_empty() {
        return Err(Error::Config(
            "sweep needs at least one value (got an empty list)".to_string(),
        ));
    }
    let mut items = Vec::with_capacity(values.len());
    let mut exit_code = 0;
    for token in &values {
        let output_path = sweep_output_path(&cfg.output_path, key, token);
        let item = match apply_sweep_value(cfg, key, token).and_then(|mut item_cfg| {
            item_cfg.output_path = output_path.clone();
            run_scenario(&item_cfg)
        }) {
            Ok(_) => SweepItem {
                value: (*token).clone(),
                output_path,
                status: "ok".to_string(),
                error: None,
            },
            Err(e) => {
                exit_code = exit_code.max(e.exit_code());
                SweepItem {
                    value: (*token).clone(),
                    output_path,
                    status: "error".to_string(),
                    error: Some(e.to_string()),
                }
            }
        };
        items.push(item);
    }
    let all_ok = items.iter().all(|i| i.status == "ok");
    let summary = SweepSummary {
        key: key.to_string(),
        items,
        all_ok,
        manifest_path: manifest_path(&cfg.output_path),
        exit_code,
    };
    let body =
        serde_json::to_string_pretty(&summary).map_err(|e| Error::Config(e.to_string()))?;
    fs::write(&summary.manifest_path, body + "\n")?;
    Ok(summary)
}

#[derive(Serialize)]
struct ValidateReport<'a> {
    seed: u64,
    dt_override: Option<f64>,
    all_passed: bool,
    criteria: &'a [CriterionOutcome],
}

/// Run the validation suite (all criteria, or a subset), print the pass/fail
/// table plus a machine-readable JSON summary, and return the outcomes.
pub fn run_validate(
    only: Option<&[usize]>,
    opts: &ValidationOptions,
) -> Result<(Vec<CriterionOutcome>, bool)> {
    let ids: Vec<usize> = match only {
        Some(ids) if !ids.is_empty() => ids.to_vec(),
        _ => (1..=validation::CRITERIA_COUNT).collect(),
    };
    let mut outcomes = Vec::with_capacity(ids.len());
    println!(
        "validation suite (seed {}, dt override {:?})",
        opts.seed, opts.dt_override
    );
    for id in ids {
        let outcome = validation::run_criterion(id, opts)?;
        println!("{}", outcome.summary_line());
        outcomes.push(outcome);
    }
    let all_passed = outcomes.iter().all(|o| o.passed);
    println!(
        "result: {} ({}/{} criteria passed)",
        if all_passed { "PASS" } else { "FAIL" },
        outcomes.iter().filter(|o| o.passed).count(),
        outcomes.len()
    );
    let report = ValidateReport {
        seed: opts.seed,
        dt_override: opts.dt_override,
        all_passed,
        criteria: &outcomes,
    };
    println!(
        "{}",
        serde_json::to_string(&report).map_err(|e| Error::Config(e.to_string()))?
    );
    Ok((outcomes, all_passed))
}
