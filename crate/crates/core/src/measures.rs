//! Correlation and coherence measures of a two-qubit state.
//!
//! Conventions: the two-qubit basis is ordered |00⟩, |01⟩, |10⟩, |11⟩
//! (first label qubit A, second qubit B). All entropies are base-2.
//!
//! - Mutual information I = S(ρ_A) + S(ρ_B) - S(ρ_AB).
//! - Classical correlation (Henderson–Vedral) C = S(ρ_A) - min over
//!   projective measurements on B of Σ_k p_k S(ρ_{A|k}); rank-one projective
//!   measurements suffice to reach the maximum for two qubits.
//! - Quantum discord (Ollivier–Zurek) Q = I - C.
//! - l1 coherence D = Σ_{i≠j} |ρ_ij| (includes single-qubit coherences).
//! - Wootters concurrence and the entanglement of formation it determines.
//!
//! The measurement projectors are parametrized as
//! |ψ1⟩ = cosθ|0⟩ + e^{iφ}sinθ|1⟩, |ψ2⟩ = sinθ|0⟩ - e^{iφ}cosθ|1⟩. The pair
//! is invariant (up to outcome swap) under θ → θ + π/2, so θ ∈ [0, π/2],
//! φ ∈ [0, 2π) covers every measurement.

use num_complex::Complex64;
use serde::Serialize;

use crate::model::{pauli_y, SpaceLayout};
use crate::qlinalg::{herm_eig, kron, matrix_sqrt_psd, partial_trace, CMatrix, PSD_CLAMP_TOL};
use crate::{Error, Result};

/// Entropy eigenvalues in [-ENTROPY_EIG_CLAMP, 0) are clamped to 0; below
/// that is an error.
pub const ENTROPY_EIG_CLAMP: f64 = 1e-9;

/// Measurement outcomes with probability below this contribute 0 to
/// conditional-entropy averages (the p·S(ρ) → 0 limit).
pub const PROB_FLOOR: f64 = 1e-12;

/// Coarse measurement grid: θ over [0, π/2], φ over [0, 2π).
pub const GRID_THETA: usize = 48;
pub const GRID_PHI: usize = 96;

/// Local refinement stops when a full coordinate-descent round improves the
/// objective by less than this.
pub const REFINE_OBJECTIVE_TOL: f64 = 1e-8;
const REFINE_MAX_ROUNDS: usize = 60;
const GOLDEN_X_TOL: f64 = 1e-9;

/// Which qubit the discord measurement acts on. The discord is asymmetric;
/// measuring B is the default convention here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MeasuredQubit {
    A,
    B,
}

/// Measurement outcome index (the projector pair has exactly two).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    First,
    Second,
}

/// Parametrized rank-one projective measurement on one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementProjectorPair {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementProjectorPair {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// Measurement basis vector for the outcome.
    pub fn ket(&self, outcome: Outcome) -> [Complex64; 2] {
        let (sin_t, cos_t) = self.theta.sin_cos();
        let phase = Complex64::from_polar(1.0, self.phi);
        match outcome {
            Outcome::First => [Complex64::new(cos_t, 0.0), phase * sin_t],
            Outcome::Second => [Complex64::new(sin_t, 0.0), -phase * cos_t],
        }
    }

    /// Rank-one projector |ψ_k⟩⟨ψ_k|.
    pub fn projector(&self, outcome: Outcome) -> CMatrix {
        let k = self.ket(outcome);
        CMatrix::outer(&k, &k)
    }
}

fn check_two_qubit(rho: &CMatrix) -> Result<()> {
    if !rho.is_square() || rho.rows() != 4 {
        return Err(Error::DimMismatch(format!(
            "expected a 4x4 two-qubit state, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    Ok(())
}

/// Von Neumann entropy S(ρ) = -Tr(ρ log₂ ρ) = -Σ λ log₂ λ, with 0·log 0 = 0.
///
/// Requires a Hermitian matrix with unit trace (within 1e-8) and eigenvalues
/// no more negative than [`ENTROPY_EIG_CLAMP`].
pub fn entropy_vn(rho: &CMatrix) -> Result<f64> {
    let tr = rho.trace();
    if (tr - Complex64::ONE).norm() > 1e-8 {
        return Err(Error::InvalidState(format!(
            "entropy_vn: trace {} is not 1 within 1e-8",
            tr.re
        )));
    }
    let eig = herm_eig(rho)?;
    let mut s = 0.0;
    for &lambda in &eig.eigenvalues {
        if lambda < -ENTROPY_EIG_CLAMP {
            return Err(Error::NegativeEigenvalue(lambda, ENTROPY_EIG_CLAMP));
        }
        if lambda > 0.0 {
            s -= lambda * lambda.log2();
        }
    }
    Ok(s.max(0.0))
}

/// Quantum mutual information I = S(ρ_A) + S(ρ_B) - S(ρ_AB).
pub fn mutual_information(rho_ab: &CMatrix) -> Result<f64> {
    check_two_qubit(rho_ab)?;
    let rho_a = partial_trace(rho_ab, &[2, 2], &[0])?;
    let rho_b = partial_trace(rho_ab, &[2, 2], &[1])?;
    let i = entropy_vn(&rho_a)? + entropy_vn(&rho_b)? - entropy_vn(rho_ab)?;
    // Subadditivity keeps I ≥ 0 analytically; absorb rounding-level negatives.
    Ok(if i < 0.0 && i > -ENTROPY_EIG_CLAMP {
        0.0
    } else {
        i
    })
}

/// Post-measurement state of the unmeasured qubit.
///
/// Projects the measured qubit onto the outcome, returning the outcome
/// probability and the normalized conditional state of the other qubit.
/// Outcomes with probability below [`PROB_FLOOR`] return `None` for the
/// state (undefined; excluded from entropy averages).
pub fn conditional_state_on(
    rho_ab: &CMatrix,
    pair: &MeasurementProjectorPair,
    outcome: Outcome,
    measured: MeasuredQubit,
) -> Result<(f64, Option<CMatrix>)> {
    check_two_qubit(rho_ab)?;
    let m = pair.projector(outcome);
    let (proj_full, keep) = match measured {
        MeasuredQubit::B => (kron(&CMatrix::identity(2), &m)?, [0usize]),
        MeasuredQubit::A => (kron(&m, &CMatrix::identity(2))?, [1usize]),
    };
    let projected = proj_full.mul(rho_ab).mul(&proj_full);
    let p = projected.trace().re.max(0.0);
    if p < PROB_FLOOR {
        return Ok((p, None));
    }
    let mut cond = partial_trace(&projected, &[2, 2], &keep)?;
    cond = cond.scale(Complex64::new(1.0 / p, 0.0));
    cond.hermitize();
    Ok((p, Some(cond)))
}

/// [`conditional_state_on`] with the default measured qubit (B).
pub fn conditional_state(
    rho_ab: &CMatrix,
    pair: &MeasurementProjectorPair,
    outcome: Outcome,
) -> Result<(f64, Option<CMatrix>)> {
    conditional_state_on(rho_ab, pair, outcome, MeasuredQubit::B)
}

/// Measurement-averaged conditional entropy Σ_k p_k S(ρ_{unmeasured|k}).
fn avg_conditional_entropy(
    rho_ab: &CMatrix,
    theta: f64,
    phi: f64,
    measured: MeasuredQubit,
) -> Result<f64> {
    let pair = MeasurementProjectorPair::new(theta, phi);
    let mut total = 0.0;
    for outcome in [Outcome::First, Outcome::Second] {
        let (p, cond) = conditional_state_on(rho_ab, &pair, outcome, measured)?;
        if let Some(state) = cond {
            total += p * entropy_vn(&state)?;
        }
    }
    Ok(total)
}

/// Golden-section minimization on [lo, hi]; shrinks the interval below
/// [`GOLDEN_X_TOL`].
fn golden_min(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > GOLDEN_X_TOL {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// Result of the measurement optimization behind the classical correlation.
#[derive(Debug, Clone, Copy)]
pub struct OptimizedCorrelation {
    /// C = S(ρ_unmeasured) - min Σ_k p_k S(ρ_{unmeasured|k}).
    pub value: f64,
    /// Optimizing measurement angles.
    pub theta: f64,
    pub phi: f64,
    /// False when the refinement hit its round cap before the objective
    /// stopped improving; the best point found is still reported.
    pub converged: bool,
}

/// Classical correlation maximized over projective measurements on `measured`.
///
/// Strategy: exhaustive coarse grid of [`GRID_THETA`]×[`GRID_PHI`] points
/// over θ ∈ [0, π/2], φ ∈ [0, 2π), then alternating golden-section descent
/// on each angle until a full round improves the objective by less than
/// [`REFINE_OBJECTIVE_TOL`].
pub fn classical_correlation_on(
    rho_ab: &CMatrix,
    measured: MeasuredQubit,
) -> Result<OptimizedCorrelation> {
    check_two_qubit(rho_ab)?;
    let unmeasured_keep = match measured {
        MeasuredQubit::B => [0usize],
        MeasuredQubit::A => [1usize],
    };
    let s_unmeasured = entropy_vn(&partial_trace(rho_ab, &[2, 2], &unmeasured_keep)?)?;

    let theta_step = std::f64::consts::FRAC_PI_2 / (GRID_THETA - 1) as f64;
    let phi_step = std::f64::consts::TAU / GRID_PHI as f64;

    let mut best = (0.0f64, 0.0f64, f64::INFINITY);
    for i in 0..GRID_THETA {
        let theta = i as f64 * theta_step;
        for j in 0..GRID_PHI {
            let phi = j as f64 * phi_step;
            let obj = avg_conditional_entropy(rho_ab, theta, phi, measured)?;
            if obj < best.2 {
                best = (theta, phi, obj);
            }
        }
    }

    let (mut theta, mut phi, mut objective) = best;
    let mut converged = false;
    for _ in 0..REFINE_MAX_ROUNDS {
        let round_start = objective;
        let lo_t = (theta - theta_step).max(0.0);
        let hi_t = (theta + theta_step).min(std::f64::consts::FRAC_PI_2);
        let (t_new, f_t) = golden_min(
            |t| avg_conditional_entropy(rho_ab, t, phi, measured),
            lo_t,
            hi_t,
        )?;
        if f_t < objective {
            theta = t_new;
            objective = f_t;
        }
        let (p_new, f_p) = golden_min(
            |p| avg_conditional_entropy(rho_ab, theta, p, measured),
            phi - phi_step,
            phi + phi_step,
        )?;
        if f_p < objective {
            phi = p_new;
            objective = f_p;
        }
        if round_start - objective < REFINE_OBJECTIVE_TOL {
            converged = true;
            break;
        }
    }
    phi = phi.rem_euclid(std::f64::consts::TAU);

    let value = (s_unmeasured - objective).max(0.0);
    Ok(OptimizedCorrelation {
        value,
        theta,
        phi,
        converged,
    })
}

/// [`classical_correlation_on`] with the default measured qubit (B).
pub fn classical_correlation(rho_ab: &CMatrix) -> Result<OptimizedCorrelation> {
    classical_correlation_on(rho_ab, MeasuredQubit::B)
}

/// Quantum discord Q = I - C, clamped at zero (raw values can sit a hair
/// below zero from the optimizer tolerance; the raw value is exposed through
/// [`sample_all`]).
pub fn quantum_discord(rho_ab: &CMatrix) -> Result<f64> {
    let i = mutual_information(rho_ab)?;
    let c = classical_correlation(rho_ab)?;
    Ok((i - c.value).max(0.0))
}

/// l1-norm coherence: the sum of the moduli of all off-diagonal entries.
/// Invariant under basis permutations (the basis order here is
/// |00⟩,|01⟩,|10⟩,|11⟩).
pub fn l1_coherence(rho: &CMatrix) -> f64 {
    debug_assert!(rho.is_square());
    let mut d = 0.0;
    for i in 0..rho.rows() {
        for j in 0..rho.cols() {
            if i != j {
                d += rho.at(i, j).norm();
            }
        }
    }
    d
}

/// Wootters concurrence via the Hermitian route: the eigenvalues of
/// √ρ · ρ̃ · √ρ with ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y) equal the squares of the
/// conventional λ_i, so C = max{0, λ₁-λ₂-λ₃-λ₄} with λ_i sorted decreasing.
pub fn concurrence(rho_ab: &CMatrix) -> Result<f64> {
    check_two_qubit(rho_ab)?;
    let yy = kron(&pauli_y(), &pauli_y())?;
    let rho_tilde = yy.mul(&rho_ab.conj()).mul(&yy);
    let sqrt_rho = matrix_sqrt_psd(rho_ab)?;
    let mut r = sqrt_rho.mul(&rho_tilde).mul(&sqrt_rho);
    r.hermitize();
    let eig = herm_eig(&r)?;
    let mut lambdas = [0.0f64; 4];
    for (k, &mu) in eig.eigenvalues.iter().enumerate() {
        if mu < -PSD_CLAMP_TOL {
            return Err(Error::NegativeEigenvalue(mu, PSD_CLAMP_TOL));
        }
        lambdas[k] = if mu.abs() <= PSD_CLAMP_TOL {
            0.0
        } else {
            mu.sqrt()
        };
    }
    // herm_eig sorts non-increasing and sqrt is monotone.
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}

/// Binary entropy h₂(f) = -f log₂ f - (1-f) log₂ (1-f).
fn binary_entropy(f: f64) -> f64 {
    let mut h = 0.0;
    if f > 0.0 {
        h -= f * f.log2();
    }
    if f < 1.0 {
        h -= (1.0 - f) * (1.0 - f).log2();
    }
    h
}

/// Entanglement of formation as a function of the concurrence:
/// E = h₂((1 + √(1-C²))/2). Zero iff C = 0 and monotone increasing in C.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    let f = 0.5 * (1.0 + (1.0 - c * c).sqrt());
    binary_entropy(f)
}

/// Entanglement of formation of a two-qubit state.
pub fn eof(rho_ab: &CMatrix) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence(rho_ab)?))
}

/// One output row: time plus every measure and diagnostic.
///
/// `discord_q` is clamped at zero; `discord_raw` is the unclamped I - C, so
/// `mutual_i = classical_c + discord_raw` holds exactly by construction.
/// `purity` and `trace_err` refer to the full tripartite state.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CorrelationSample {
    pub t_ns: f64,
    #[serde(rename = "coherence_D")]
    pub coherence_d: f64,
    #[serde(rename = "discord_Q")]
    pub discord_q: f64,
    pub discord_raw: f64,
    #[serde(rename = "classical_C")]
    pub classical_c: f64,
    #[serde(rename = "mutual_I")]
    pub mutual_i: f64,
    pub concurrence: f64,
    pub eof: f64,
    pub purity: f64,
    pub trace_err: f64,
    pub argmax_theta: f64,
    pub argmax_phi: f64,
    #[serde(rename = "coh_A")]
    pub coh_a: f64,
    #[serde(rename = "coh_B")]
    pub coh_b: f64,
    pub optimizer_converged: bool,
}

/// Reduce the full tripartite state over the resonator and compute every
/// [`CorrelationSample`] field.
pub fn sample_all(
    rho_full: &CMatrix,
    layout: &SpaceLayout,
    t: f64,
    measured: MeasuredQubit,
) -> Result<CorrelationSample> {
    if !rho_full.is_square() || rho_full.rows() != layout.total_dim() {
        return Err(Error::DimMismatch(format!(
            "sample_all: state is {}x{}, layout dim is {}",
            rho_full.rows(),
            rho_full.cols(),
            layout.total_dim()
        )));
    }
    let rho_ab = partial_trace(rho_full, &layout.dims(), &[0, 1])?;
    let rho_a = partial_trace(&rho_ab, &[2, 2], &[0])?;
    let rho_b = partial_trace(&rho_ab, &[2, 2], &[1])?;

    let coherence_d = l1_coherence(&rho_ab);
    let mutual_i = mutual_information(&rho_ab)?;
    let opt = classical_correlation_on(&rho_ab, measured)?;
    let discord_raw = mutual_i - opt.value;
    let conc = concurrence(&rho_ab)?;

    let trace_err = (rho_full.trace() - Complex64::ONE).norm();
    // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ.
    let purity: f64 = rho_full.data().iter().map(|z| z.norm_sqr()).sum();

    Ok(CorrelationSample {
        t_ns: t,
        coherence_d,
        discord_q: discord_raw.max(0.0),
        discord_raw,
        classical_c: opt.value,
        mutual_i,
        concurrence: conc,
        eof: eof_from_concurrence(conc),
        purity,
        trace_err,
        argmax_theta: opt.theta,
        argmax_phi: opt.phi,
        coh_a: l1_coherence(&rho_a),
        coh_b: l1_coherence(&rho_b),
        optimizer_converged: opt.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::kron_vec;
    use crate::validation::{random_two_qubit_density, random_two_qubit_pure, werner_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ket(amplitudes: &[(usize, Complex64)], dim: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::ZERO; dim];
        for &(i, a) in amplitudes {
            v[i] = a;
        }
        v
    }

    fn bell_phi_plus() -> CMatrix {
        let inv = 1.0 / 2f64.sqrt();
        let v = ket(&[(0, c(inv, 0.0)), (3, c(inv, 0.0))], 4);
        CMatrix::outer(&v, &v)
    }

    /// α|01⟩ + √(1-α²)|10⟩
    fn bell_like_psi(alpha: f64) -> CMatrix {
        let v = ket(
            &[
                (1, c(alpha, 0.0)),
                (2, c((1.0 - alpha * alpha).sqrt(), 0.0)),
            ],
            4,
        );
        CMatrix::outer(&v, &v)
    }

    fn diag4(entries: [f64; 4]) -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        for (i, &x) in entries.iter().enumerate() {
            m.set(i, i, c(x, 0.0));
        }
        m
    }

    #[test]
    fn entropy_of_pure_and_mixed_states() {
        assert!(entropy_vn(&bell_phi_plus()).unwrap().abs() < 1e-12);
        let half = CMatrix::identity(2).scale(c(0.5, 0.0));
        assert!((entropy_vn(&half).unwrap() - 1.0).abs() < 1e-12);
        let quarter = CMatrix::identity(4).scale(c(0.25, 0.0));
        assert!((entropy_vn(&quarter).unwrap() - 2.0).abs() < 1e-12);

        // -0.25 log2 0.25 - 0.75 log2 0.75, evaluated by hand.
        let mut biased = CMatrix::zeros(2, 2);
        biased.set(0, 0, c(0.25, 0.0));
        biased.set(1, 1, c(0.75, 0.0));
        assert!((entropy_vn(&biased).unwrap() - 0.8112781244591328).abs() < 1e-12);
    }

    #[test]
    fn entropy_rejects_bad_inputs() {
        let not_normalized = CMatrix::identity(2);
        assert!(entropy_vn(&not_normalized).is_err());
        let mut indefinite = diag4([0.6, 0.5, 0.0, -0.1]);
        indefinite.set(3, 3, c(-0.1, 0.0));
        assert!(matches!(
            entropy_vn(&indefinite),
            Err(Error::NegativeEigenvalue(..))
        ));
    }

    #[test]
    fn mutual_information_reference_values() {
        // Product state: I = 0.
        let mut a2 = CMatrix::zeros(2, 2);
        a2.set(0, 0, c(0.3, 0.0));
        a2.set(1, 1, c(0.7, 0.0));
        let mut b2 = CMatrix::zeros(2, 2);
        b2.set(0, 0, c(0.9, 0.0));
        b2.set(1, 1, c(0.1, 0.0));
        let product = kron(&a2, &b2).unwrap();
        assert!(mutual_information(&product).unwrap() < 1e-10);

        // Bell state: I = 2.
        assert!((mutual_information(&bell_phi_plus()).unwrap() - 2.0).abs() < 1e-10);

        // Classically correlated: I = 1.
        let cc = diag4([0.5, 0.0, 0.0, 0.5]);
        assert!((mutual_information(&cc).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn projector_pair_is_complete_and_orthogonal() {
        for (theta, phi) in [(0.0, 0.0), (0.7, 1.3), (1.4, 5.9), (0.25, 3.1)] {
            let pair = MeasurementProjectorPair::new(theta, phi);
            let p1 = pair.projector(Outcome::First);
            let p2 = pair.projector(Outcome::Second);
            let sum = p1.add(&p2);
            assert!(sum.max_abs_diff(&CMatrix::identity(2)) < 1e-14);
            assert!(p1.mul(&p2).max_abs() < 1e-14);
            // θ → θ + π/2 swaps the outcomes.
            let swapped = MeasurementProjectorPair::new(theta + std::f64::consts::FRAC_PI_2, phi);
            assert!(swapped.projector(Outcome::First).max_abs_diff(&p2) < 1e-14);
        }
    }

    #[test]
    fn conditional_state_eigenbasis_measurement() {
        // ρ = |01⟩⟨01|, θ = 0 measures B in the computational basis:
        // outcome 2 (|1⟩⟨1|) has p = 1 and leaves A in |0⟩⟨0|.
        let rho = diag4([0.0, 1.0, 0.0, 0.0]);
        let pair = MeasurementProjectorPair::new(0.0, 0.0);
        let (p1, cond1) = conditional_state(&rho, &pair, Outcome::First).unwrap();
        assert!(p1 < PROB_FLOOR && cond1.is_none());
        let (p2, cond2) = conditional_state(&rho, &pair, Outcome::Second).unwrap();
        assert!((p2 - 1.0).abs() < 1e-12);
        let expected = {
            let mut m = CMatrix::zeros(2, 2);
            m.set(0, 0, Complex64::ONE);
            m
        };
        assert!(cond2.unwrap().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn conditional_state_bell_perfect_correlation() {
        let rho = bell_phi_plus();
        let pair = MeasurementProjectorPair::new(0.0, 0.0);
        for (outcome, which) in [(Outcome::First, 0usize), (Outcome::Second, 1usize)] {
            let (p, cond) = conditional_state(&rho, &pair, outcome).unwrap();
            assert!((p - 0.5).abs() < 1e-12);
            let mut expected = CMatrix::zeros(2, 2);
            expected.set(which, which, Complex64::ONE);
            assert!(cond.unwrap().max_abs_diff(&expected) < 1e-12);
        }
    }

    /// Completeness oracle: Σ_k p_k ρ_{A|k} must reconstruct the unmeasured
    /// marginal of the dephased state Σ_k Π_k ρ Π_k.
    #[test]
    fn conditional_states_reconstruct_dephased_marginal() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for _ in 0..10 {
            let rho = random_two_qubit_density(&mut rng);
            let pair = MeasurementProjectorPair::new(0.83, 2.31);
            let mut mix = CMatrix::zeros(2, 2);
            let mut dephased = CMatrix::zeros(4, 4);
            for outcome in [Outcome::First, Outcome::Second] {
                let (p, cond) = conditional_state(&rho, &pair, outcome).unwrap();
                if let Some(state) = cond {
                    mix = mix.add(&state.scale(c(p, 0.0)));
                }
                let proj = kron(&CMatrix::identity(2), &pair.projector(outcome)).unwrap();
                dephased = dephased.add(&proj.mul(&rho).mul(&proj));
            }
            let expected = partial_trace(&dephased, &[2, 2], &[0]).unwrap();
            assert!(mix.max_abs_diff(&expected) < 1e-12);
        }
    }

    #[test]
    fn classical_correlation_product_state_is_zero() {
        let mut a2 = CMatrix::zeros(2, 2);
        a2.set(0, 0, c(0.3, 0.0));
        a2.set(1, 1, c(0.7, 0.0));
        let mut b2 = CMatrix::zeros(2, 2);
        b2.set(0, 0, c(0.6, 0.0));
        b2.set(1, 1, c(0.4, 0.0));
        let product = kron(&a2, &b2).unwrap();
        let opt = classical_correlation(&product).unwrap();
        assert!(opt.value < 1e-6, "C = {}", opt.value);
    }

    #[test]
    fn classical_correlation_bell_state_is_one() {
        let opt = classical_correlation(&bell_phi_plus()).unwrap();
        assert!((opt.value - 1.0).abs() < 1e-6, "C = {}", opt.value);
    }

    #[test]
    fn discord_reference_values() {
        // Product state: Q = 0.
        let mut a2 = CMatrix::zeros(2, 2);
        a2.set(0, 0, c(0.2, 0.0));
        a2.set(1, 1, c(0.8, 0.0));
        let product = kron(&a2, &a2).unwrap();
        assert!(quantum_discord(&product).unwrap() < 1e-6);

        // Bell state: Q = 1.
        assert!((quantum_discord(&bell_phi_plus()).unwrap() - 1.0).abs() < 1e-6);

        // Pure non-maximally entangled state: Q equals the EoF.
        let rho = bell_like_psi((0.2f64).sqrt());
        let q = quantum_discord(&rho).unwrap();
        let e = eof(&rho).unwrap();
        assert!((q - e).abs() < 1e-4, "Q = {q}, E = {e}");
    }

    #[test]
    fn l1_coherence_reference_values() {
        assert!((l1_coherence(&bell_phi_plus()) - 1.0).abs() < 1e-12);
        assert_eq!(l1_coherence(&diag4([0.4, 0.3, 0.2, 0.1])), 0.0);

        // (|0⟩+|1⟩)(|0⟩+|1⟩)/2 on both qubits: all 16 entries are 1/4,
        // so D = 12 · 1/4 = 3.
        let plus = [c(0.5f64.sqrt(), 0.0), c(0.5f64.sqrt(), 0.0)];
        let v = kron_vec(&plus, &plus);
        let rho = CMatrix::outer(&v, &v);
        assert!((l1_coherence(&rho) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn l1_coherence_invariant_under_simultaneous_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let rho = random_two_qubit_density(&mut rng);
        // |0⟩ ↔ |1⟩ on both qubits: index i ↔ 3 - i.
        let mut flipped = CMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                flipped.set(3 - i, 3 - j, rho.at(i, j));
            }
        }
        assert!((l1_coherence(&rho) - l1_coherence(&flipped)).abs() < 1e-12);
    }

    #[test]
    fn concurrence_reference_values() {
        assert!((concurrence(&bell_phi_plus()).unwrap() - 1.0).abs() < 1e-8);
        let product = diag4([1.0, 0.0, 0.0, 0.0]);
        assert!(concurrence(&product).unwrap() < 1e-10);
        // Pure-state concurrence 2|α|√(1-α²): α² = 1/5 gives 0.8.
        let rho = bell_like_psi((0.2f64).sqrt());
        assert!((concurrence(&rho).unwrap() - 0.8).abs() < 1e-10);
    }

    /// Independent oracle for the concurrence: the λ_i are the square roots
    /// of the eigenvalues of the (non-Hermitian) product ρρ̃, obtained here
    /// from its characteristic polynomial (Faddeev–LeVerrier) and a
    /// Durand–Kerner root solve, with no shared code with the Hermitian
    /// route under test.
    fn concurrence_char_poly(rho: &CMatrix) -> f64 {
        let yy = kron(&pauli_y(), &pauli_y()).unwrap();
        let m = rho.mul(&yy.mul(&rho.conj()).mul(&yy));

        // Faddeev–LeVerrier: p(λ) = λ⁴ - c1λ³ - c2λ² - c3λ - c4 with
        // M_1 = M, c_k = Tr(M_k)/k, M_{k+1} = M(M_k - c_k I).
        let id = CMatrix::identity(4);
        let mut mk = m.clone();
        let mut coeffs = [Complex64::ZERO; 4];
        for (k, coeff) in coeffs.iter_mut().enumerate() {
            let ck = mk.trace() / (k as f64 + 1.0);
            *coeff = ck;
            if k < 3 {
                mk = m.mul(&mk.sub(&id.scale(ck)));
            }
        }

        // Durand–Kerner on λ⁴ - c1λ³ - c2λ² - c3λ - c4.
        let poly = |z: Complex64| -> Complex64 {
            z * z * z * z
                - coeffs[0] * z * z * z
                - coeffs[1] * z * z
                - coeffs[2] * z
                - coeffs[3]
        };
        let mut roots = [
            Complex64::new(0.4, 0.9),
            Complex64::new(0.4, 0.9) * Complex64::new(0.4, 0.9),
            Complex64::new(0.4, 0.9).powu(3),
            Complex64::new(0.4, 0.9).powu(4),
        ];
        for _ in 0..200 {
            let mut next = roots;
            for i in 0..4 {
                let mut denom = Complex64::ONE;
                for j in 0..4 {
                    if i != j {
                        denom *= roots[i] - roots[j];
                    }
                }
                next[i] = roots[i] - poly(roots[i]) / denom;
            }
            let shift: f64 = roots
                .iter()
                .zip(&next)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            roots = next;
            if shift < 1e-15 {
                break;
            }
        }

        let mut lambdas: Vec<f64> = roots.iter().map(|z| z.re.max(0.0).sqrt()).collect();
        lambdas.sort_by(|a, b| b.total_cmp(a));
        (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
    }

    #[test]
    fn concurrence_hermitian_route_matches_char_poly_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let rho = random_two_qubit_density(&mut rng);
            let fast = concurrence(&rho).unwrap();
            let oracle = concurrence_char_poly(&rho);
            assert!(
                (fast - oracle).abs() < 1e-8,
                "hermitian {fast} vs char-poly {oracle}"
            );
        }
    }

    #[test]
    fn eof_reference_values() {
        assert_eq!(eof_from_concurrence(0.0), 0.0);
        assert!((eof_from_concurrence(1.0) - 1.0).abs() < 1e-15);
        // C = 0.8: f = 0.8, E = -0.8 log2 0.8 - 0.2 log2 0.2 (by hand).
        assert!((eof_from_concurrence(0.8) - 0.7219280948873623).abs() < 1e-12);
        // Monotone in C.
        let values: Vec<f64> = (0..=10).map(|k| eof_from_concurrence(k as f64 / 10.0)).collect();
        assert!(values.windows(2).all(|w| w[0] < w[1] + 1e-15));
    }

    #[test]
    fn random_mixed_states_satisfy_bounds_and_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let rho = random_two_qubit_density(&mut rng);
            let i = mutual_information(&rho).unwrap();
            let opt = classical_correlation(&rho).unwrap();
            let q_raw = i - opt.value;
            let e = eof(&rho).unwrap();
            assert!(i >= -1e-9);
            assert!(opt.value >= -1e-6);
            assert!(q_raw >= -1e-6, "raw discord {q_raw}");
            assert!(e >= 0.0);
            // I = C + Q is exact by construction for the raw discord.
            assert_eq!(opt.value + q_raw, i);
        }
    }

    #[test]
    fn pure_states_have_discord_equal_to_eof() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let rho = random_two_qubit_pure(&mut rng);
            let q = quantum_discord(&rho).unwrap();
            let e = eof(&rho).unwrap();
            assert!((q - e).abs() < 1e-4, "pure state: Q = {q}, E = {e}");
        }
    }

    #[test]
    fn classically_correlated_states_have_no_discord() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            use rand::Rng;
            let p: f64 = rng.random_range(0.05..0.95);
            let rho = diag4([p, 0.0, 0.0, 1.0 - p]);
            let q = quantum_discord(&rho).unwrap();
            assert!(q < 1e-5, "classical state discord {q}");
        }
    }

    #[test]
    fn werner_state_optimizer_matches_brute_force_grid() {
        use crate::validation::brute_force_classical_correlation;
        let rho = werner_state(0.5);
        let opt = classical_correlation(&rho).unwrap();
        let brute = brute_force_classical_correlation(&rho, 512, 512);
        assert!(
            (opt.value - brute).abs() < 1e-4,
            "optimizer {} vs brute force {}",
            opt.value,
            brute
        );
    }

    #[test]
    fn optimizer_value_is_phase_covariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rho = random_two_qubit_density(&mut rng);
        let base = classical_correlation(&rho).unwrap();
        // Apply a phase rotation on qubit B; the optimum shifts in φ but the
        // value must not move.
        let phase = Complex64::from_polar(1.0, 1.234);
        let mut u = CMatrix::identity(2);
        u.set(1, 1, phase);
        let ub = kron(&CMatrix::identity(2), &u).unwrap();
        let rotated = ub.mul(&rho).mul(&ub.adjoint());
        let shifted = classical_correlation(&rotated).unwrap();
        assert!(
            (base.value - shifted.value).abs() < 1e-5,
            "C = {} vs {}",
            base.value,
            shifted.value
        );
    }

    #[test]
    fn sample_all_reference_rows() {
        use crate::model::SpaceLayout;
        let layout = SpaceLayout::new(5);

        // Bell ⊗ vacuum: (D, Q, C, I, concurrence, E) = (1, 1, 1, 2, 1, 1).
        let inv = 1.0 / 2f64.sqrt();
        let mut v = vec![Complex64::ZERO; 24];
        v[layout.index(0, 0, 0)] = c(inv, 0.0);
        v[layout.index(1, 1, 0)] = c(inv, 0.0);
        let rho = CMatrix::outer(&v, &v);
        let s = sample_all(&rho, &layout, 0.0, MeasuredQubit::B).unwrap();
        assert!((s.coherence_d - 1.0).abs() < 1e-9);
        assert!((s.discord_q - 1.0).abs() < 1e-6);
        assert!((s.classical_c - 1.0).abs() < 1e-6);
        assert!((s.mutual_i - 2.0).abs() < 1e-9);
        assert!((s.concurrence - 1.0).abs() < 1e-9);
        assert!((s.eof - 1.0).abs() < 1e-9);
        assert!((s.purity - 1.0).abs() < 1e-12);
        assert!(s.trace_err < 1e-12);

        // |00⟩⟨00| ⊗ |1⟩⟨1|: everything vanishes.
        let v2 = layout.basis_ket(0, 0, 1);
        let rho2 = CMatrix::outer(&v2, &v2);
        let s2 = sample_all(&rho2, &layout, 1.0, MeasuredQubit::B).unwrap();
        assert!(s2.coherence_d < 1e-12);
        assert!(s2.discord_q < 1e-6);
        assert!(s2.mutual_i < 1e-9);
        assert!(s2.concurrence < 1e-9);
        assert!(s2.eof < 1e-9);

        // Separable (|0⟩+|1⟩)⊗(|0⟩+|1⟩)/2 ⊗ |0⟩: Q = 0, E = 0, D = 3.
        let plus = [c(inv, 0.0), c(inv, 0.0)];
        let qubits = kron_vec(&plus, &plus);
        let mut fock0 = vec![Complex64::ZERO; 6];
        fock0[0] = Complex64::ONE;
        let v3 = kron_vec(&qubits, &fock0);
        let rho3 = CMatrix::outer(&v3, &v3);
        let s3 = sample_all(&rho3, &layout, 2.0, MeasuredQubit::B).unwrap();
        assert!((s3.coherence_d - 3.0).abs() < 1e-9);
        assert!(s3.discord_q < 1e-6);
        assert!(s3.eof < 1e-9);
        // Marginal coherences are 1 each for |+⟩.
        assert!((s3.coh_a - 1.0).abs() < 1e-9);
        assert!((s3.coh_b - 1.0).abs() < 1e-9);
    }
}
