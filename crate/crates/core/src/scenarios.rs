//! Built-in initial-state families, the resonator's initial Fock state, and
//! the default parameter set.
//!
//! Three families of two-qubit initial states are provided:
//!
//! - `bell_psi`:   (α|01⟩ + √(1-α²)|10⟩) ⊗ |n⟩ with n ≥ 1 — single-excitation
//!   superpositions, paired with a non-empty resonator.
//! - `bell_phi`:   (β|00⟩ + √(1-β²)|11⟩) ⊗ |0⟩ — paired with an empty
//!   resonator.
//! - `separable`:  ½(|0⟩+|1⟩)⊗(|0⟩+|1⟩) ⊗ |n⟩ — a pure product state of the
//!   qubits; both the empty (n = 0) and singly occupied (n = 1) resonator
//!   variants are first-class scenarios.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::TimeGrid;
use crate::model::{PhysicalParams, SpaceLayout};
use crate::qlinalg::CMatrix;
use crate::{Error, Result};

/// Initial-state family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    BellPsi,
    BellPhi,
    Separable,
}

/// Complete description of one run: initial state plus parameters and grid.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioSpec {
    pub family: Family,
    /// α for `bell_psi`, β for `bell_phi`; unused by `separable`.
    pub amplitude: f64,
    /// Initial resonator Fock level.
    pub resonator_fock: usize,
    pub params: PhysicalParams,
    pub grid: TimeGrid,
}

impl ScenarioSpec {
    /// Build the initial density matrix for this scenario.
    pub fn initial_state(
        &self,
        layout: &SpaceLayout,
        allow_empty_resonator: bool,
    ) -> Result<CMatrix> {
        match self.family {
            Family::BellPsi => initial_bell_psi(
                self.amplitude,
                self.resonator_fock,
                layout,
                allow_empty_resonator,
            ),
            Family::BellPhi => initial_bell_phi(self.amplitude, layout),
            Family::Separable => initial_separable(layout, self.resonator_fock),
        }
    }
}

fn check_amplitude(name: &str, amplitude: f64) -> Result<()> {
    if !amplitude.is_finite() || !(0.0..=1.0).contains(&amplitude) {
        return Err(Error::InvalidParam(format!(
            "{name} must lie in [0, 1], got {amplitude}"
        )));
    }
    Ok(())
}

fn check_fock(layout: &SpaceLayout, n: usize) -> Result<()> {
    if n > layout.n_max() {
        return Err(Error::InvalidParam(format!(
            "resonator_fock {n} exceeds the Fock cutoff {}",
            layout.n_max()
        )));
    }
    Ok(())
}

fn pure_state(layout: &SpaceLayout, amplitudes: &[(usize, f64)]) -> CMatrix {
    let mut v = vec![Complex64::ZERO; layout.total_dim()];
    for &(idx, a) in amplitudes {
        v[idx] = Complex64::new(a, 0.0);
    }
    CMatrix::outer(&v, &v)
}

/// (α|01⟩ + √(1-α²)|10⟩) ⊗ |n⟩.
///
/// The resonator level must be nonzero for this family; `n = 0` is rejected
/// unless `allow_empty_resonator` is set.
pub fn initial_bell_psi(
    alpha: f64,
    n: usize,
    layout: &SpaceLayout,
    allow_empty_resonator: bool,
) -> Result<CMatrix> {
    check_amplitude("alpha", alpha)?;
    check_fock(layout, n)?;
    if n == 0 && !allow_empty_resonator {
        return Err(Error::InvalidParam(
            "bell_psi expects a non-empty resonator (n >= 1); \
             set allow_empty_resonator to override"
                .to_string(),
        ));
    }
    Ok(pure_state(
        layout,
        &[
            (layout.index(0, 1, n), alpha),
            (layout.index(1, 0, n), (1.0 - alpha * alpha).sqrt()),
        ],
    ))
}

/// (β|00⟩ + √(1-β²)|11⟩) ⊗ |0⟩; the resonator starts empty for this family.
pub fn initial_bell_phi(beta: f64, layout: &SpaceLayout) -> Result<CMatrix> {
    check_amplitude("beta", beta)?;
    Ok(pure_state(
        layout,
        &[
            (layout.index(0, 0, 0), beta),
            (layout.index(1, 1, 0), (1.0 - beta * beta).sqrt()),
        ],
    ))
}

/// ½(|0⟩+|1⟩) ⊗ (|0⟩+|1⟩) ⊗ |n⟩.
pub fn initial_separable(layout: &SpaceLayout, n: usize) -> Result<CMatrix> {
    check_fock(layout, n)?;
    Ok(pure_state(
        layout,
        &[
            (layout.index(0, 0, n), 0.5),
            (layout.index(0, 1, n), 0.5),
            (layout.index(1, 0, n), 0.5),
            (layout.index(1, 1, n), 0.5),
        ],
    ))
}

/// Default model parameters: g/2π = 100 MHz, κ/2π = 1 MHz, γ/2π = 0.16 MHz,
/// γ_φ/2π = 15.8 MHz, Fock cutoff 5, converted to rad/ns.
pub fn default_params() -> PhysicalParams {
    use std::f64::consts::TAU;
    PhysicalParams {
        g: TAU * 0.1,
        kappa: TAU * 1e-3,
        gamma: TAU * 1.6e-4,
        gamma_phi: TAU * 1.58e-2,
        n_max: 5,
    }
}

/// Default integration grid: 0–200 ns at dt = 0.002 ns, sampled every
/// 0.2 ns. The span covers many swap periods (2π/(√2·g) ≈ 7.07 ns) and
/// several dephasing times (1/γ_φ ≈ 10 ns).
pub fn default_grid() -> TimeGrid {
    TimeGrid {
        t_start: 0.0,
        t_end: 200.0,
        dt: 0.002,
        sample_every: 100,
    }
}
