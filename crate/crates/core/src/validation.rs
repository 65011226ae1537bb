//! Built-in validation suite.
//!
//! Eleven numbered criteria combine exact analytic oracles (damped cavity,
//! pure dephasing, relaxation, integrator self-convergence), brute-force
//! cross-checks of the discord optimizer, conservation bounds, and
//! feature-level checks of the dissipative dynamics (entanglement sudden
//! death with surviving discord, correlation generation from separable
//! states). The CLI `validate` subcommand and the `acceptance` integration
//! test target both execute these functions.
//!
//! Randomized checks use a ChaCha8 generator seeded from
//! [`VALIDATION_SEED`] (recorded in every report) so failures reproduce.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::cli;
use crate::dynamics::{evolve_and_sample, EvolutionDiagnostics, TimeGrid};
use crate::measures::{
    classical_correlation, eof, quantum_discord, sample_all, CorrelationSample, MeasuredQubit,
};
use crate::model::{
    build_generator, embed_op, number_operator, total_excitation, PhysicalParams, Site,
    SpaceLayout,
};
use crate::qlinalg::CMatrix;
use crate::scenarios::{
    default_grid, default_params, initial_bell_phi, initial_bell_psi, initial_separable,
};
use crate::{Error, Result};

/// Seed of the named 64-bit generator behind every randomized check.
pub const VALIDATION_SEED: u64 = 424242;

/// Number of criteria in the suite.
pub const CRITERIA_COUNT: usize = 11;

#[derive(Debug, Clone, Copy)]
pub struct ValidationOptions {
    pub seed: u64,
    /// Overrides the integrator step of every evolution-based criterion.
    /// Intended as a deliberate-failure probe (a coarse step breaks the
    /// conservation and oracle tolerances).
    pub dt_override: Option<f64>,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            seed: VALIDATION_SEED,
            dt_override: None,
        }
    }
}

/// Result of one criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_s: f64,
}

impl CriterionOutcome {
    pub fn summary_line(&self) -> String {
        format!(
            "[{:>2}] {:<42} {}  ({:>7.2} s)  {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed_s,
            self.detail
        )
    }
}

pub fn criterion_name(id: usize) -> &'static str {
    match id {
        1 => "initial-value exactness",
        2 => "pure-state discord equals EoF",
        3 => "ESD with discord robustness",
        4 => "separable-state correlation generation",
        5 => "damped-cavity oracle",
        6 => "pure-dephasing oracle",
        7 => "relaxation oracle",
        8 => "conservation suite",
        9 => "discord optimizer vs brute force",
        10 => "integrator convergence",
        11 => "determinism",
        _ => "unknown",
    }
}

/// Run one criterion by id (1-based). Numerical aborts inside a criterion
/// are reported as failures, not propagated.
pub fn run_criterion(id: usize, opts: &ValidationOptions) -> Result<CriterionOutcome> {
    let body: fn(&ValidationOptions) -> Result<(bool, String)> = match id {
        1 => initial_value_exactness,
        2 => pure_state_discord_equals_eof,
        3 => esd_with_discord_robustness,
        4 => separable_correlation_generation,
        5 => damped_cavity_oracle,
        6 => pure_dephasing_oracle,
        7 => relaxation_oracle,
        8 => conservation_suite,
        9 => optimizer_vs_brute_force,
        10 => integrator_convergence,
        11 => determinism,
        _ => {
            return Err(Error::InvalidParam(format!(
                "criterion id must be 1..={CRITERIA_COUNT}, got {id}"
            )))
        }
    };
    let started = Instant::now();
    let (passed, detail) = match body(opts) {
        Ok(r) => r,
        Err(e) => (false, format!("aborted: {e}")),
    };
    Ok(CriterionOutcome {
        id,
        name: criterion_name(id),
        passed,
        detail,
        elapsed_s: started.elapsed().as_secs_f64(),
    })
}

/// Run the whole suite in order.
pub fn run_all(opts: &ValidationOptions) -> Vec<CriterionOutcome> {
    (1..=CRITERIA_COUNT)
        .map(|id| run_criterion(id, opts).expect("criterion ids are in range"))
        .collect()
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Random two-qubit density matrix from the Ginibre construction
/// ρ = G G† / Tr(G G†).
pub fn random_two_qubit_density(rng: &mut impl Rng) -> CMatrix {
    let data: Vec<Complex64> = (0..16).map(|_| complex_normal(rng)).collect();
    let g = CMatrix::from_vec(4, 4, data).expect("finite entries");
    let mut rho = g.mul(&g.adjoint());
    let tr = rho.trace().re;
    rho = rho.scale(Complex64::new(1.0 / tr, 0.0));
    rho.hermitize();
    rho
}

/// Random pure two-qubit state (uniform on the sphere of state vectors).
pub fn random_two_qubit_pure(rng: &mut impl Rng) -> CMatrix {
    let mut v: Vec<Complex64> = (0..4).map(|_| complex_normal(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    CMatrix::outer(&v, &v)
}

/// Werner state z|Φ⁺⟩⟨Φ⁺| + (1-z)·I/4.
pub fn werner_state(z: f64) -> CMatrix {
    let inv = 1.0 / 2f64.sqrt();
    let phi_plus = [
        Complex64::new(inv, 0.0),
        Complex64::ZERO,
        Complex64::ZERO,
        Complex64::new(inv, 0.0),
    ];
    let pure = CMatrix::outer(&phi_plus, &phi_plus);
    pure.scale(Complex64::new(z, 0.0))
        .add(&CMatrix::identity(4).scale(Complex64::new((1.0 - z) / 4.0, 0.0)))
}

fn h_bits(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.log2()
    } else {
        0.0
    }
}

/// Entropy of a 2×2 Hermitian unit-trace matrix [[d0, off], [off*, d1]] from
/// its closed-form eigenvalues m ± r.
fn entropy_2x2(d0: f64, d1: f64, off: Complex64) -> f64 {
    let m = 0.5 * (d0 + d1);
    let r = ((0.5 * (d0 - d1)).powi(2) + off.norm_sqr()).sqrt();
    h_bits((m + r).clamp(0.0, 1.0)) + h_bits((m - r).clamp(0.0, 1.0))
}

/// Dense-grid oracle for the classical correlation, fully independent of the
/// production optimizer: explicit index arithmetic for the projected states
/// and closed-form 2×2 eigenvalues for every entropy.
///
/// Measures qubit B on an `n_theta` × `n_phi` grid over θ ∈ [0, π/2],
/// φ ∈ [0, 2π).
pub fn brute_force_classical_correlation(rho: &CMatrix, n_theta: usize, n_phi: usize) -> f64 {
    let idx = |i: usize, b: usize| 2 * i + b;

    // Marginal of A: ρ_A[i][j] = Σ_b ρ[(i,b),(j,b)].
    let a00 = (rho.at(idx(0, 0), idx(0, 0)) + rho.at(idx(0, 1), idx(0, 1))).re;
    let a11 = (rho.at(idx(1, 0), idx(1, 0)) + rho.at(idx(1, 1), idx(1, 1))).re;
    let a01 = rho.at(idx(0, 0), idx(1, 0)) + rho.at(idx(0, 1), idx(1, 1));
    let s_a = entropy_2x2(a00, a11, a01);

    let mut min_avg = f64::INFINITY;
    for i in 0..n_theta {
        let theta = i as f64 * std::f64::consts::FRAC_PI_2 / (n_theta - 1) as f64;
        let (sin_t, cos_t) = theta.sin_cos();
        for j in 0..n_phi {
            let phi = j as f64 * std::f64::consts::TAU / n_phi as f64;
            let phase = Complex64::from_polar(1.0, phi);
            let kets = [
                [Complex64::new(cos_t, 0.0), phase * sin_t],
                [Complex64::new(sin_t, 0.0), -phase * cos_t],
            ];
            let mut avg = 0.0;
            for w in &kets {
                // Unnormalized conditional state of A:
                // B[i][j] = Σ_{b,b'} w*[b] ρ[(i,b),(j,b')] w[b'].
                let mut b00 = Complex64::ZERO;
                let mut b11 = Complex64::ZERO;
                let mut b01 = Complex64::ZERO;
                for b in 0..2 {
                    for bp in 0..2 {
                        let weight = w[b].conj() * w[bp];
                        b00 += weight * rho.at(idx(0, b), idx(0, bp));
                        b11 += weight * rho.at(idx(1, b), idx(1, bp));
                        b01 += weight * rho.at(idx(0, b), idx(1, bp));
                    }
                }
                let p = (b00.re + b11.re).max(0.0);
                if p < 1e-12 {
                    continue;
                }
                avg += p * entropy_2x2(b00.re / p, b11.re / p, b01 / p);
            }
            if avg < min_avg {
                min_avg = avg;
            }
        }
    }
    (s_a - min_avg).max(0.0)
}

/// Evolve a prepared state and compute the full measure set at each sample.
fn evolve_with_measures(
    params: &PhysicalParams,
    rho0: &CMatrix,
    grid: &TimeGrid,
) -> Result<(Vec<CorrelationSample>, EvolutionDiagnostics)> {
    let layout = params.layout();
    let gen = build_generator(params)?;
    evolve_and_sample(&gen, rho0, grid, &layout, |t, rho| {
        sample_all(rho, &layout, t, MeasuredQubit::B)
    })
}

/// Steps between samples for a desired sample spacing.
fn sample_stride(sample_dt: f64, dt: f64) -> usize {
    ((sample_dt / dt).round() as usize).max(1)
}

/// Maximal runs of consecutive samples with exactly zero EoF, reported as
/// (time span, max clamped discord inside the run).
fn dead_eof_intervals(samples: &[CorrelationSample]) -> Vec<(f64, f64)> {
    let mut intervals = Vec::new();
    let mut run_start: Option<usize> = None;
    for (k, s) in samples.iter().enumerate() {
        let dead = s.eof == 0.0;
        match (dead, run_start) {
            (true, None) => run_start = Some(k),
            (false, Some(start)) => {
                let span = samples[k - 1].t_ns - samples[start].t_ns;
                let max_q = samples[start..k]
                    .iter()
                    .map(|s| s.discord_q)
                    .fold(0.0, f64::max);
                intervals.push((span, max_q));
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(start) = run_start {
        let last = samples.len() - 1;
        let span = samples[last].t_ns - samples[start].t_ns;
        let max_q = samples[start..]
            .iter()
            .map(|s| s.discord_q)
            .fold(0.0, f64::max);
        intervals.push((span, max_q));
    }
    intervals
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

/// 1: bell_psi and bell_phi at maximal amplitude have D = Q = E = 1 at t = 0
/// within 1e-6. Budget 1 s.
fn initial_value_exactness(_opts: &ValidationOptions) -> Result<(bool, String)> {
    let started = Instant::now();
    let layout = SpaceLayout::new(5);
    let states = [
        initial_bell_psi(0.5f64.sqrt(), 1, &layout, false)?,
        initial_bell_phi(0.5f64.sqrt(), &layout)?,
    ];
    let mut worst = 0.0f64;
    for rho in &states {
        let s = sample_all(rho, &layout, 0.0, MeasuredQubit::B)?;
        for value in [s.coherence_d, s.discord_q, s.eof] {
            worst = worst.max((value - 1.0).abs());
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    let passed = worst < 1e-6 && elapsed < 1.0;
    Ok((
        passed,
        format!("max |value - 1| = {worst:.2e} (tol 1e-6), runtime {elapsed:.3} s (budget 1 s)"),
    ))
}

/// 2: |Q - E| < 1e-4 for 50 random pure states and the six built-in
/// amplitudes. Budget 30 s.
fn pure_state_discord_equals_eof(opts: &ValidationOptions) -> Result<(bool, String)> {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(2));
    let mut states: Vec<CMatrix> = (0..50).map(|_| random_two_qubit_pure(&mut rng)).collect();
    for amp_sq in [0.5, 0.2, 0.1] {
        let a = f64::sqrt(amp_sq);
        let b = f64::sqrt(1.0 - amp_sq);
        // α|01⟩ + √(1-α²)|10⟩ and β|00⟩ + √(1-β²)|11⟩ as bare two-qubit states.
        let psi = [
            Complex64::ZERO,
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
            Complex64::ZERO,
        ];
        let phi = [
            Complex64::new(a, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(b, 0.0),
        ];
        states.push(CMatrix::outer(&psi, &psi));
        states.push(CMatrix::outer(&phi, &phi));
    }
    let mut worst = 0.0f64;
    for rho in &states {
        let q = quantum_discord(rho)?;
        let e = eof(rho)?;
        worst = worst.max((q - e).abs());
    }
    let elapsed = started.elapsed().as_secs_f64();
    let passed = worst < 1e-4 && elapsed < 30.0;
    Ok((
        passed,
        format!(
            "max |Q - E| = {worst:.2e} over {} pure states (tol 1e-4), runtime {elapsed:.1} s \
             (budget 30 s)",
            states.len()
        ),
    ))
}

/// 3: over the default 200 ns run of bell_psi α² = 1/2, the EoF vanishes on
/// at least one interval of length ≥ 1 ns where the discord still exceeds
/// 0.01. Budget 5 min.
fn esd_with_discord_robustness(opts: &ValidationOptions) -> Result<(bool, String)> {
    let started = Instant::now();
    let params = default_params();
    let dt = opts.dt_override.unwrap_or(default_grid().dt);
    let grid = TimeGrid {
        t_start: 0.0,
        t_end: 200.0,
        dt,
        sample_every: sample_stride(0.2, dt),
    };
    let layout = params.layout();
    let rho0 = initial_bell_psi(0.5f64.sqrt(), 1, &layout, false)?;
    let (samples, _) = evolve_with_measures(&params, &rho0, &grid)?;

    let intervals = dead_eof_intervals(&samples);
    let qualifying = intervals
        .iter()
        .filter(|(span, max_q)| *span >= 1.0 && *max_q > 0.01)
        .count();
    let best = intervals
        .iter()
        .cloned()
        .max_by(|a, b| (a.0 * a.1).total_cmp(&(b.0 * b.1)))
        .unwrap_or((0.0, 0.0));
    let elapsed = started.elapsed().as_secs_f64();
    let passed = qualifying > 0 && elapsed < 300.0;
    Ok((
        passed,
        format!(
            "{} dead-EoF interval(s) with span >= 1 ns and max Q > 0.01 \
             (best span {:.1} ns, max Q {:.3}); runtime {elapsed:.0} s (budget 300 s)",
            qualifying, best.0, best.1
        ),
    ))
}

/// 4: the separable state with an empty resonator generates discord
/// (> 0.01) but no entanglement (concurrence < 0.05) over 100 ns; with one
/// photon it does generate entanglement (max EoF > 0.01).
fn separable_correlation_generation(opts: &ValidationOptions) -> Result<(bool, String)> {
    let params = default_params();
    let dt = opts.dt_override.unwrap_or(default_grid().dt);
    let grid = TimeGrid {
        t_start: 0.0,
        t_end: 100.0,
        dt,
        sample_every: sample_stride(0.2, dt),
    };
    let layout = params.layout();

    let empty = initial_separable(&layout, 0)?;
    let (samples0, _) = evolve_with_measures(&params, &empty, &grid)?;
    let max_q0 = samples0.iter().map(|s| s.discord_q).fold(0.0, f64::max);
    let max_c0 = samples0.iter().map(|s| s.concurrence).fold(0.0, f64::max);

    let single = initial_separable(&layout, 1)?;
    let (samples1, _) = evolve_with_measures(&params, &single, &grid)?;
    let max_e1 = samples1.iter().map(|s| s.eof).fold(0.0, f64::max);

    let passed = max_q0 > 0.01 && max_c0 < 0.05 && max_e1 > 0.01;
    Ok((
        passed,
        format!(
            "n=0: max Q = {max_q0:.3} (> 0.01), max concurrence = {max_c0:.3} (< 0.05); \
             n=1: max EoF = {max_e1:.3} (> 0.01)"
        ),
    ))
}

/// 5: with g = 0 and only κ active, ⟨n⟩(t) follows e^{-κt} within 1e-6
/// relative over [0, 3/κ].
fn damped_cavity_oracle(opts: &ValidationOptions) -> Result<(bool, String)> {
    use std::f64::consts::TAU;
    let kappa = TAU * 1e-3;
    let params = PhysicalParams {
        g: 0.0,
        kappa,
        gamma: 0.0,
        gamma_phi: 0.0,
        n_max: 5,
    };
    let dt = opts.dt_override.unwrap_or(0.05);
    let grid = TimeGrid {
        t_start: 0.0,
        t_end: 3.0 / kappa,
        dt,
        sample_every: sample_stride(1.0, dt),
    };
    let layout = params.layout();
    let rho0 = {
        let v = layout.basis_ket(0, 0, 1);
        CMatrix::outer(&v, &v)
    };
    let n_op = embed_op(
        &layout,
        Site::Resonator,
        &number_operator(layout.resonator_dim()),
    )?;
    let gen = build_generator(&params)?;
    let (samples, _) = evolve_and_sample(&gen, &rho0, &grid, &layout, |t, rho| {
        Ok((t, rho.trace_of_product(&n_op).re))
    })?;
    let max_rel = samples
        .iter()
        .map(|&(t, n)| {
            let expected = (-kappa * t).exp();
            ((n - expected) / expected).abs()
        })
        .fold(0.0, f64::max);
    Ok((
        max_rel < 1e-6,
        format!("max relative error of <n>(t) vs e^(-kt) = {max_rel:.2e} (tol 1e-6)"),
    ))
}

/// 6: with only γ_φ active, |ρ_A,01(t)| follows ½e^{-γ_φ t} within 1e-6
/// relative over [0, 5/γ_φ].
fn pure_dephasing_oracle(opts: &ValidationOptions) -> Result<(bool, String)> {
    use std::f64::consts::TAU;
    let gamma_phi = TAU * 1.58e-2;
    let params = PhysicalParams {
        g: 0.0,
        kappa: 0.0,
        gamma: 0.0,
        gamma_phi,
        n_max: 5,
    };
    let dt = opts.dt_override.unwrap_or(0.01);
    let grid = TimeGrid {
        t_start: 0.0,
        t_end: 5.0 / gamma_phi,
        dt,
        sample_every: sample_stride(1.0, dt),
    };
    let layout = params.layout();
    let inv = 1.0 / 2f64.sqrt();
    let rho0 = {
        let mut v = vec![Complex64::ZERO; layout.total_dim()];
        v[layout.index(0, 0, 0)] = Complex64::new(inv, 0.0);
        v[layout.index(1, 0, 0)] = Complex64::new(inv, 0.0);
        CMatrix::outer(&v, &v)
    };
    let gen = build_generator(&params)?;
    let (samples, _) = evolve_and_sample(&gen, &rho0, &grid, &layout, |t, rho| {
        let rho_a = crate::qlinalg::partial_trace(rho, &layout.dims(), &[0])?;
        Ok((t, rho_a.at(0, 1).norm()))
    })?;
    let max_rel = samples
        .iter()
        .map(|&(t, coh)| {
            let expected = 0.5 * (-gamma_phi * t).exp();
            ((coh - expected) / expected).abs()
        })
        .fold(0.0, f64::max);
    Ok((
        max_rel < 1e-6,
        format!("max relative error of |rho_A,01|(t) vs 0.5 e^(-g_phi t) = {max_rel:.2e} (tol 1e-6)"),
    ))
}

/// 7: with only γ active, the excited population follows e^{-γt} within
/// 1e-6 relative over [0, 3/γ].
fn relaxation_oracle(opts: &ValidationOptions) -> Result<(bool, String)> {
    use std::f64::consts::TAU;
    let gamma = TAU * 1.6e-4;
    let params = PhysicalParams {
        g: 0.0,
        kappa: 0.0,
        gamma,
        gamma_phi: 0.0,
        n_max: 5,
    };
    let dt = opts.dt_override.unwrap_or(0.5);
    let grid = TimeGrid {
        t_start: 0.0,
        t_end: 3.0 / gamma,
        dt,
        sample_every: sample_stride(25.0, dt),
    };
    let layout = params.layout();
    let rho0 = {
        let v = layout.basis_ket(1, 0, 0);
        CMatrix::outer(&v, &v)
    };
    let idx = layout.index(1, 0, 0);
    let gen = build_generator(&params)?;
    let (samples, _) = evolve_and_sample(&gen, &rho0, &grid, &layout, |t, rho| {
        Ok((t, rho.at(idx, idx).re))
    })?;
    let max_rel = samples
        .iter()
        .map(|&(t, pop)| {
            let expected = (-gamma * t).exp();
            ((pop - expected) / expected).abs()
        })
        .fold(0.0, f64::max);
    Ok((
        max_rel < 1e-6,
        format!("max relative error of population(t) vs e^(-gt) = {max_rel:.2e} (tol 1e-6)"),
    ))
}

/// 8: over the default 200 ns run, |Tr ρ - 1| < 1e-8, min eigenvalue >
/// -1e-8, cutoff population < 1e-4; the closed-system variant conserves
/// excitation and purity within 1e-8.
fn conservation_suite(opts: &ValidationOptions) -> Result<(bool, String)> {
    let params = default_params();
    let dt = opts.dt_override.unwrap_or(default_grid().dt);
    let grid = TimeGrid {
        t_start: 0.0,
        t_end: 200.0,
        dt,
        sample_every: sample_stride(0.2, dt),
    };
    let layout = params.layout();
    let rho0 = initial_bell_psi(0.5f64.sqrt(), 1, &layout, false)?;

    let gen = build_generator(&params)?;
    let (_, diag) = evolve_and_sample(&gen, &rho0, &grid, &layout, |_, _| Ok(()))?;
    let dissipative_ok = diag.max_trace_error < 1e-8
        && diag.min_eigenvalue > -1e-8
        && diag.max_cutoff_population < 1e-4;

    let closed_params = PhysicalParams {
        kappa: 0.0,
        gamma: 0.0,
        gamma_phi: 0.0,
        ..params
    };
    let closed_gen = build_generator(&closed_params)?;
    let n_exc = total_excitation(&layout);
    let n0 = rho0.trace_of_product(&n_exc).re;
    let (closed_samples, _) = evolve_and_sample(&closed_gen, &rho0, &grid, &layout, |_, rho| {
        let purity: f64 = rho.data().iter().map(|z| z.norm_sqr()).sum();
        Ok((purity, rho.trace_of_product(&n_exc).re))
    })?;
    let max_purity_err = closed_samples
        .iter()
        .map(|(p, _)| (p - 1.0).abs())
        .fold(0.0, f64::max);
    let max_exc_err = closed_samples
        .iter()
        .map(|(_, n)| (n - n0).abs())
        .fold(0.0, f64::max);
    let closed_ok = max_purity_err < 1e-8 && max_exc_err < 1e-8;

    Ok((
        dissipative_ok && closed_ok,
        format!(
            "dissipative: max |Tr-1| = {:.1e} (<1e-8), min eig = {:.1e} (>-1e-8), cutoff pop = \
             {:.1e} (<1e-4); closed: purity drift {:.1e}, excitation drift {:.1e} (<1e-8)",
            diag.max_trace_error,
            diag.min_eigenvalue,
            diag.max_cutoff_population,
            max_purity_err,
            max_exc_err
        ),
    ))
}

/// 9: the grid+refine optimizer agrees with a dense 512×512 grid oracle
/// within 1e-4 on Werner states and 20 random mixed states; Werner discord
/// endpoints are 0 and 1.
fn optimizer_vs_brute_force(opts: &ValidationOptions) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(9));
    let mut states: Vec<CMatrix> = [0.0, 0.25, 0.5, 0.75, 1.0]
        .iter()
        .map(|&z| werner_state(z))
        .collect();
    states.extend((0..20).map(|_| random_two_qubit_density(&mut rng)));

    let mut worst = 0.0f64;
    for rho in &states {
        let opt = classical_correlation(rho)?;
        let brute = brute_force_classical_correlation(rho, 512, 512);
        worst = worst.max((opt.value - brute).abs());
    }
    let q0 = quantum_discord(&werner_state(0.0))?;
    let q1 = quantum_discord(&werner_state(1.0))?;
    let endpoints_ok = q0.abs() < 1e-4 && (q1 - 1.0).abs() < 1e-4;
    Ok((
        worst < 1e-4 && endpoints_ok,
        format!(
            "max |C_opt - C_grid| = {worst:.2e} over {} states (tol 1e-4); \
             Q(z=0) = {q0:.2e}, Q(z=1) = {q1:.6}",
            states.len()
        ),
    ))
}

/// 10: halving the step reduces the 10 ns self-convergence error by a factor
/// in [12, 20] against a dt/16 reference.
fn integrator_convergence(opts: &ValidationOptions) -> Result<(bool, String)> {
    let params = default_params();
    let layout = params.layout();
    let gen = build_generator(&params)?;
    let rho0 = initial_bell_psi(0.5f64.sqrt(), 1, &layout, false)?;

    // The study step: coarse enough that the dt^4 term dominates rounding
    // noise (at the production step of 0.002 ns the 10 ns global error sits
    // near 1e-13, too close to accumulation noise to measure an order).
    let dt = opts.dt_override.unwrap_or(0.04);
    let run = |dt: f64| -> Result<CMatrix> {
        let grid = TimeGrid {
            t_start: 0.0,
            t_end: 10.0,
            dt,
            sample_every: usize::MAX,
        };
        let (samples, _) =
            evolve_and_sample(&gen, &rho0, &grid, &layout, |_, rho| Ok(rho.clone()))?;
        Ok(samples.into_iter().last().expect("final sample"))
    };
    let reference = run(dt / 16.0)?;
    let e1 = run(dt)?.max_abs_diff(&reference);
    let e2 = run(dt / 2.0)?.max_abs_diff(&reference);
    let ratio = e1 / e2;
    Ok((
        (12.0..=20.0).contains(&ratio),
        format!(
            "error ratio e(dt)/e(dt/2) = {ratio:.2} at dt = {dt} ns (must lie in [12, 20]; \
             e1 = {e1:.2e}, e2 = {e2:.2e})"
        ),
    ))
}

/// 11: two identical `run` invocations produce bit-identical CSV files.
fn determinism(opts: &ValidationOptions) -> Result<(bool, String)> {
    let dir = std::env::temp_dir().join(format!(
        "corrbus-validate-{}-{}",
        std::process::id(),
        opts.seed
    ));
    std::fs::create_dir_all(&dir)?;
    let out_path = dir.join("determinism.csv");
    let dt = opts.dt_override.unwrap_or(0.002);
    let config_json = format!(
        r#"{{"t_end": 5.0, "dt": {dt}, "output_path": "{}"}}"#,
        out_path.display()
    );
    let cfg = cli::parse_config(&config_json)?;

    cli::run_scenario(&cfg)?;
    let first = std::fs::read(&out_path)?;
    cli::run_scenario(&cfg)?;
    let second = std::fs::read(&out_path)?;
    let identical = first == second;
    let _ = std::fs::remove_dir_all(&dir);
    Ok((
        identical,
        format!(
            "two runs of the same config produced {} bytes each, bit-identical: {identical}",
            first.len()
        ),
    ))
}
