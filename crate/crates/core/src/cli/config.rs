//! Run configuration: a flat JSON object with defaults for every key.
//! Unknown keys are rejected outright — a silently ignored typo would
//! corrupt a sweep.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::dynamics::TimeGrid;
use crate::measures::MeasuredQubit;
use crate::model::PhysicalParams;
use crate::scenarios::{self, Family, ScenarioSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    #[serde(rename = "csv")]
    Csv,
    #[serde(rename = "json-lines")]
    JsonLines,
}

#[derive(Debug, Clone, Copy, Deserialize)]
enum MeasureSideKey {
    A,
    B,
}

/// The raw schema: every key optional, no extras tolerated.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    family: Option<Family>,
    amplitude_sq: Option<f64>,
    resonator_fock: Option<usize>,
    allow_empty_resonator: Option<bool>,
    g: Option<f64>,
    kappa: Option<f64>,
    gamma: Option<f64>,
    gamma_phi: Option<f64>,
    n_max: Option<usize>,
    t_start: Option<f64>,
    t_end: Option<f64>,
    dt: Option<f64>,
    sample_every: Option<usize>,
    output_path: Option<PathBuf>,
    output_format: Option<OutputFormat>,
    measure_side: Option<MeasureSideKey>,
    emit_marginal_coherences: Option<bool>,
}

/// A fully validated run configuration with all defaults filled in.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub family: Family,
    pub amplitude_sq: f64,
    pub resonator_fock: usize,
    pub allow_empty_resonator: bool,
    pub params: PhysicalParams,
    pub grid: TimeGrid,
    pub output_path: PathBuf,
    pub output_format: OutputFormat,
    pub measure_side: MeasuredQubit,
    pub emit_marginal_coherences: bool,
}

impl RunConfig {
    /// Scenario description (amplitude is the state amplitude, i.e. the
    /// square root of the configured `amplitude_sq`).
    pub fn scenario(&self) -> ScenarioSpec {
        ScenarioSpec {
            family: self.family,
            amplitude: self.amplitude_sq.sqrt(),
            resonator_fock: self.resonator_fock,
            params: self.params,
            grid: self.grid,
        }
    }

    /// Re-check every invariant; used after sweep values are patched in.
    pub fn validate(&self) -> Result<()> {
        if !self.amplitude_sq.is_finite() || !(0.0..=1.0).contains(&self.amplitude_sq) {
            return Err(Error::Config(format!(
                "amplitude_sq must lie in [0, 1], got {}",
                self.amplitude_sq
            )));
        }
        self.params
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        self.grid
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        if self.resonator_fock > self.params.n_max {
            return Err(Error::Config(format!(
                "resonator_fock {} exceeds n_max {}",
                self.resonator_fock, self.params.n_max
            )));
        }
        match self.family {
            Family::BellPsi => {
                if self.resonator_fock == 0 && !self.allow_empty_resonator {
                    return Err(Error::Config(
                        "bell_psi expects resonator_fock >= 1; \
                         set allow_empty_resonator to override"
                            .to_string(),
                    ));
                }
            }
            Family::BellPhi => {
                if self.resonator_fock != 0 {
                    return Err(Error::Config(format!(
                        "bell_phi starts with an empty resonator; resonator_fock must be 0, \
                         got {}",
                        self.resonator_fock
                    )));
                }
            }
            Family::Separable => {}
        }
        Ok(())
    }
}

/// Parse and validate a configuration document.
///
/// Absent keys take their defaults: the `bell_psi` family at
/// amplitude_sq = 0.5 with one resonator photon, the default parameter
/// set, the 0–200 ns grid, CSV output to `results.csv`, measurement on
/// qubit B.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;

    let family = raw.family.unwrap_or(Family::BellPsi);
    let default_fock = match family {
        Family::BellPsi | Family::Separable => 1,
        Family::BellPhi => 0,
    };

    let defaults = scenarios::default_params();
    let params = PhysicalParams {
        g: raw.g.unwrap_or(defaults.g),
        kappa: raw.kappa.unwrap_or(defaults.kappa),
        gamma: raw.gamma.unwrap_or(defaults.gamma),
        gamma_phi: raw.gamma_phi.unwrap_or(defaults.gamma_phi),
        n_max: raw.n_max.unwrap_or(defaults.n_max),
    };
    let default_grid = scenarios::default_grid();
    let grid = TimeGrid {
        t_start: raw.t_start.unwrap_or(default_grid.t_start),
        t_end: raw.t_end.unwrap_or(default_grid.t_end),
        dt: raw.dt.unwrap_or(default_grid.dt),
        sample_every: raw.sample_every.unwrap_or(default_grid.sample_every),
    };

    let config = RunConfig {
        family,
        amplitude_sq: raw.amplitude_sq.unwrap_or(0.5),
        resonator_fock: raw.resonator_fock.unwrap_or(default_fock),
        allow_empty_resonator: raw.allow_empty_resonator.unwrap_or(false),
        params,
        grid,
        output_path: raw.output_path.unwrap_or_else(|| PathBuf::from("results.csv")),
        output_format: raw.output_format.unwrap_or(OutputFormat::Csv),
        measure_side: match raw.measure_side {
            Some(MeasureSideKey::A) => MeasuredQubit::A,
            Some(MeasureSideKey::B) | None => MeasuredQubit::B,
        },
        emit_marginal_coherences: raw.emit_marginal_coherences.unwrap_or(false),
    };
    config.validate()?;
    Ok(config)
}

/// Keys accepted by `sweep`.
pub const SWEEPABLE_KEYS: &[&str] = &[
    "amplitude_sq",
    "resonator_fock",
    "g",
    "kappa",
    "gamma",
    "gamma_phi",
    "n_max",
    "t_start",
    "t_end",
    "dt",
    "sample_every",
];

/// Apply one swept value (as the raw CLI token) to a copy of the config.
pub fn apply_sweep_value(base: &RunConfig, key: &str, token: &str) -> Result<RunConfig> {
    let mut cfg = base.clone();
    let parse_f64 = || -> Result<f64> {
        token
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("sweep value {token:?} is not a number")))
    };
    let parse_usize = || -> Result<usize> {
        token
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("sweep value {token:?} is not a non-negative integer")))
    };
    match key {
        "amplitude_sq" => cfg.amplitude_sq = parse_f64()?,
        "resonator_fock" => cfg.resonator_fock = parse_usize()?,
        "g" => cfg.params.g = parse_f64()?,
        "kappa" => cfg.params.kappa = parse_f64()?,
        "gamma" => cfg.params.gamma = parse_f64()?,
        "gamma_phi" => cfg.params.gamma_phi = parse_f64()?,
        "n_max" => cfg.params.n_max = parse_usize()?,
        "t_start" => cfg.grid.t_start = parse_f64()?,
        "t_end" => cfg.grid.t_end = parse_f64()?,
        "dt" => cfg.grid.dt = parse_f64()?,
        "sample_every" => cfg.grid.sample_every = parse_usize()?,
        _ => {
            return Err(Error::Config(format!(
                "key {key:?} is not sweepable; expected one of {SWEEPABLE_KEYS:?}"
            )))
        }
    }
    cfg.validate()?;
    Ok(cfg)
}
