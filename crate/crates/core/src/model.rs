//! The physical model: a composite Hilbert space of two resonant qubits and
//! one truncated bosonic mode, the excitation-swap interaction Hamiltonian
//! in the rotating frame,
//!
//! ```text
//!   V = g Σ_{i=A,B} (a σ_i† + a† σ_i),
//! ```
//!
//! and the open-system generator with per-qubit pure dephasing at rate γ_φ,
//! per-qubit relaxation at rate γ, and photon leakage at rate κ:
//!
//! ```text
//!   dρ/dt = -i[V, ρ]
//!         + Σ_i (γ_φ/2)(σ_zi ρ σ_zi - ρ)
//!         + Σ_i (γ/2)(2 σ_i ρ σ_i† - σ_i†σ_i ρ - ρ σ_i†σ_i)
//!         + (κ/2)(2 a ρ a† - a†a ρ - ρ a†a).
//! ```
//!
//! Internal units: time in ns, angular frequencies in rad/ns, which keeps all
//! magnitudes near unity for the integrator.

use num_complex::Complex64;

use crate::qlinalg::{kron, CMatrix};
use crate::{Error, Result};

/// Hamiltonians must be Hermitian to within this max |H - H†| entry.
pub const HAMILTONIAN_HERM_TOL: f64 = 1e-12;

/// Subsystems of the composite space, in tensor order: qubit A ⊗ qubit B ⊗
/// resonator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    QubitA,
    QubitB,
    Resonator,
}

/// Ordered subsystem dimensions and index conventions.
///
/// Basis convention: qubit level 0 is the ground state |0⟩, level 1 the
/// excited state |1⟩. The composite index of |a, b, n⟩ is
/// `a·2·(n_max+1) + b·(n_max+1) + n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceLayout {
    n_max: usize,
}

impl SpaceLayout {
    pub fn new(n_max: usize) -> Self {
        Self { n_max }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Resonator dimension (Fock levels 0..=n_max).
    pub fn resonator_dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn total_dim(&self) -> usize {
        4 * self.resonator_dim()
    }

    pub fn dims(&self) -> [usize; 3] {
        [2, 2, self.resonator_dim()]
    }

    pub fn site_dim(&self, site: Site) -> usize {
        match site {
            Site::QubitA | Site::QubitB => 2,
            Site::Resonator => self.resonator_dim(),
        }
    }

    /// Composite basis index of |a, b, n⟩.
    pub fn index(&self, a: usize, b: usize, n: usize) -> usize {
        debug_assert!(a < 2 && b < 2 && n <= self.n_max);
        a * 2 * self.resonator_dim() + b * self.resonator_dim() + n
    }

    /// Basis ket |a, b, n⟩ as a state vector.
    pub fn basis_ket(&self, a: usize, b: usize, n: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::ZERO; self.total_dim()];
        v[self.index(a, b, n)] = Complex64::ONE;
        v
    }
}

/// Model rates and the Fock cutoff, all angular frequencies in rad/ns.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PhysicalParams {
    /// Qubit–resonator coupling g.
    pub g: f64,
    /// Photon leakage rate κ.
    pub kappa: f64,
    /// Qubit relaxation rate γ (identical qubits).
    pub gamma: f64,
    /// Qubit pure-dephasing rate γ_φ (identical qubits).
    pub gamma_phi: f64,
    /// Fock cutoff: resonator levels 0..=n_max are retained.
    pub n_max: usize,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("g", self.g),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("gamma_phi", self.gamma_phi),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParam(format!(
                    "{name} must be a finite non-negative rate, got {value}"
                )));
            }
        }
        if self.n_max < 1 {
            return Err(Error::InvalidParam(format!(
                "n_max must be at least 1, got {}",
                self.n_max
            )));
        }
        Ok(())
    }

    pub fn layout(&self) -> SpaceLayout {
        SpaceLayout::new(self.n_max)
    }
}

/// How a dissipation channel enters the master equation.
///
/// `Standard` is the usual (rate/2)(2LρL† - L†Lρ - ρL†L). `Dephasing` applies
/// (rate/2)(LρL - ρ) with a Hermitian, involutory jump operator (σ_z); the two
/// coincide for σ_z, the tag records which expression is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelForm {
    Standard,
    Dephasing,
}

/// One (rate, jump operator) dissipation channel.
#[derive(Debug, Clone)]
pub struct Channel {
    pub rate: f64,
    pub jump: CMatrix,
    pub form: ChannelForm,
}

/// Interaction Hamiltonian plus dissipation channels.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    hamiltonian: CMatrix,
    channels: Vec<Channel>,
}

impl LindbladGenerator {
    pub fn new(hamiltonian: CMatrix, channels: Vec<Channel>) -> Result<Self> {
        if !hamiltonian.is_square() {
            return Err(Error::DimMismatch(format!(
                "Hamiltonian must be square, got {}x{}",
                hamiltonian.rows(),
                hamiltonian.cols()
            )));
        }
        let dev = hamiltonian.hermiticity_error();
        if dev > HAMILTONIAN_HERM_TOL {
            return Err(Error::NotHermitian {
                deviation: dev,
                tolerance: HAMILTONIAN_HERM_TOL,
            });
        }
        let dim = hamiltonian.rows();
        for (k, ch) in channels.iter().enumerate() {
            if !ch.rate.is_finite() || ch.rate < 0.0 {
                return Err(Error::InvalidParam(format!(
                    "channel {k}: rate must be finite and non-negative, got {}",
                    ch.rate
                )));
            }
            if ch.jump.rows() != dim || ch.jump.cols() != dim {
                return Err(Error::DimMismatch(format!(
                    "channel {k}: jump operator is {}x{}, Hamiltonian dim is {dim}",
                    ch.jump.rows(),
                    ch.jump.cols()
                )));
            }
            if ch.form == ChannelForm::Dephasing && !ch.jump.is_hermitian(HAMILTONIAN_HERM_TOL) {
                return Err(Error::InvalidParam(format!(
                    "channel {k}: dephasing-form jump operator must be Hermitian"
                )));
            }
        }
        Ok(Self {
            hamiltonian,
            channels,
        })
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.rows()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_vec(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap()
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_vec(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap()
}

/// Pauli z with the excited state at eigenvalue +1: σ_z|1⟩ = +|1⟩,
/// σ_z|0⟩ = -|0⟩.
pub fn pauli_z() -> CMatrix {
    CMatrix::from_vec(2, 2, vec![c(-1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]).unwrap()
}

/// Qubit raising operator σ† = |1⟩⟨0|.
pub fn raising() -> CMatrix {
    CMatrix::from_vec(2, 2, vec![c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.)]).unwrap()
}

/// Qubit lowering operator σ = |0⟩⟨1|.
pub fn lowering() -> CMatrix {
    CMatrix::from_vec(2, 2, vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]).unwrap()
}

/// Bosonic annihilation operator on a truncated Fock space:
/// a|n⟩ = √n |n-1⟩. The truncation simply drops the blocks beyond `dim`.
pub fn annihilation(dim: usize) -> CMatrix {
    let mut a = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        a.set(n - 1, n, c((n as f64).sqrt(), 0.0));
    }
    a
}

/// Photon number operator a†a.
pub fn number_operator(dim: usize) -> CMatrix {
    let mut n_op = CMatrix::zeros(dim, dim);
    for n in 0..dim {
        n_op.set(n, n, c(n as f64, 0.0));
    }
    n_op
}

/// Lift a single-site operator to the composite space:
/// `I ⊗ … ⊗ local ⊗ … ⊗ I` per the layout ordering.
pub fn embed_op(layout: &SpaceLayout, site: Site, local: &CMatrix) -> Result<CMatrix> {
    let d = layout.site_dim(site);
    if local.rows() != d || local.cols() != d {
        return Err(Error::DimMismatch(format!(
            "embed_op: local operator is {}x{} but site {:?} has dim {d}",
            local.rows(),
            local.cols(),
            site
        )));
    }
    let r = layout.resonator_dim();
    match site {
        Site::QubitA => kron(&kron(local, &CMatrix::identity(2))?, &CMatrix::identity(r)),
        Site::QubitB => kron(&kron(&CMatrix::identity(2), local)?, &CMatrix::identity(r)),
        Site::Resonator => kron(&CMatrix::identity(4), local),
    }
}

/// Interaction Hamiltonian V = g Σ_i (a σ_i† + a† σ_i).
///
/// Its only nonzero elements connect states that swap one excitation between
/// a qubit and the resonator: ⟨1,b,n|V|0,b,n+1⟩ = g√(n+1) (and the mirrored
/// qubit-B elements).
pub fn build_interaction(layout: &SpaceLayout, g: f64) -> Result<CMatrix> {
    if !g.is_finite() || g < 0.0 {
        return Err(Error::InvalidParam(format!(
            "coupling g must be finite and non-negative, got {g}"
        )));
    }
    let a_full = embed_op(layout, Site::Resonator, &annihilation(layout.resonator_dim()))?;
    let raise_a = embed_op(layout, Site::QubitA, &raising())?;
    let raise_b = embed_op(layout, Site::QubitB, &raising())?;
    let half = a_full.mul(&raise_a).add(&a_full.mul(&raise_b));
    Ok(half.add(&half.adjoint()).scale(c(g, 0.0)))
}

/// Total excitation number N = a†a + σ_A†σ_A + σ_B†σ_B; V commutes with it.
pub fn total_excitation(layout: &SpaceLayout) -> CMatrix {
    let n_r = embed_op(
        layout,
        Site::Resonator,
        &number_operator(layout.resonator_dim()),
    )
    .unwrap();
    let up = raising().mul(&lowering());
    let n_a = embed_op(layout, Site::QubitA, &up).unwrap();
    let n_b = embed_op(layout, Site::QubitB, &up).unwrap();
    n_r.add(&n_a).add(&n_b)
}

/// Assemble the full generator for the given parameters: the interaction
/// Hamiltonian plus two dephasing channels (σ_z, rate γ_φ), two relaxation
/// channels (σ, rate γ), and one leakage channel (a, rate κ).
pub fn build_generator(params: &PhysicalParams) -> Result<LindbladGenerator> {
    params.validate()?;
    let layout = params.layout();
    let hamiltonian = build_interaction(&layout, params.g)?;

    let channels = vec![
        Channel {
            rate: params.gamma_phi,
            jump: embed_op(&layout, Site::QubitA, &pauli_z())?,
            form: ChannelForm::Dephasing,
        },
        Channel {
            rate: params.gamma_phi,
            jump: embed_op(&layout, Site::QubitB, &pauli_z())?,
            form: ChannelForm::Dephasing,
        },
        Channel {
            rate: params.gamma,
            jump: embed_op(&layout, Site::QubitA, &lowering())?,
            form: ChannelForm::Standard,
        },
        Channel {
            rate: params.gamma,
            jump: embed_op(&layout, Site::QubitB, &lowering())?,
            form: ChannelForm::Standard,
        },
        Channel {
            rate: params.kappa,
            jump: embed_op(&layout, Site::Resonator, &annihilation(layout.resonator_dim()))?,
            form: ChannelForm::Standard,
        },
    ];
    LindbladGenerator::new(hamiltonian, channels)
}

/// Energy gap between the dressed qubit eigenstates: ω_d = √(4T² + Δ²).
pub fn qubit_gap(delta: f64, t_tunnel: f64) -> f64 {
    (4.0 * t_tunnel * t_tunnel + delta * delta).sqrt()
}

/// Coupling coefficient from circuit parameters:
/// g = (e·C_c / 2C_tot) · √(ω₀ / (L·C₀)), in the caller's unit system.
pub fn coupling_coefficient(
    e_charge: f64,
    c_c: f64,
    c_tot: f64,
    omega0: f64,
    l_length: f64,
    c0_per_len: f64,
) -> Result<f64> {
    for (name, v) in [
        ("e_charge", e_charge),
        ("c_c", c_c),
        ("c_tot", c_tot),
        ("omega0", omega0),
        ("l_length", l_length),
        ("c0_per_len", c0_per_len),
    ] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    Ok(e_charge * c_c / (2.0 * c_tot) * (omega0 / (l_length * c0_per_len)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_index_is_a_bijection() {
        let layout = SpaceLayout::new(5);
        assert_eq!(layout.total_dim(), 24);
        let mut seen = [false; 24];
        for a in 0..2 {
            for b in 0..2 {
                for n in 0..6 {
                    let idx = layout.index(a, b, n);
                    assert!(!seen[idx]);
                    seen[idx] = true;
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn embed_identity_is_identity() {
        let layout = SpaceLayout::new(5);
        for site in [Site::QubitA, Site::QubitB, Site::Resonator] {
            let id = CMatrix::identity(layout.site_dim(site));
            let full = embed_op(&layout, site, &id).unwrap();
            assert_eq!(full, CMatrix::identity(24));
        }
    }

    #[test]
    fn embedded_raising_excites_qubit_a() {
        let layout = SpaceLayout::new(5);
        let op = embed_op(&layout, Site::QubitA, &raising()).unwrap();
        let out = op.mul_vec(&layout.basis_ket(0, 0, 0));
        let expected = layout.basis_ket(1, 0, 0);
        for (x, y) in out.iter().zip(&expected) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn disjoint_site_operators_commute() {
        let layout = SpaceLayout::new(5);
        let za = embed_op(&layout, Site::QubitA, &pauli_z()).unwrap();
        let zb = embed_op(&layout, Site::QubitB, &pauli_z()).unwrap();
        let comm = za.mul(&zb).sub(&zb.mul(&za));
        assert!(comm.max_abs() < 1e-14);
    }

    #[test]
    fn embed_rejects_dim_mismatch() {
        let layout = SpaceLayout::new(5);
        let bad = CMatrix::identity(3);
        assert!(embed_op(&layout, Site::QubitA, &bad).is_err());
    }

    #[test]
    fn interaction_vanishes_when_decoupled() {
        let layout = SpaceLayout::new(5);
        let v = build_interaction(&layout, 0.0).unwrap();
        assert_eq!(v.max_abs(), 0.0);
        assert!(build_interaction(&layout, -0.1).is_err());
    }

    #[test]
    fn interaction_matrix_elements_follow_ladder_rule() {
        let layout = SpaceLayout::new(5);
        let g = 0.35;
        let v = build_interaction(&layout, g).unwrap();
        // ⟨1,0,0|V|0,0,1⟩ = g
        let el = v.at(layout.index(1, 0, 0), layout.index(0, 0, 1));
        assert!((el - Complex64::new(g, 0.0)).norm() < 1e-14);
        // ⟨0,1,1|V|0,0,2⟩ = g√2
        let el2 = v.at(layout.index(0, 1, 1), layout.index(0, 0, 2));
        assert!((el2 - Complex64::new(g * 2f64.sqrt(), 0.0)).norm() < 1e-14);
        // General rule across the ladder.
        for b in 0..2 {
            for n in 0..layout.n_max() {
                let el = v.at(layout.index(1, b, n), layout.index(0, b, n + 1));
                let expected = g * ((n + 1) as f64).sqrt();
                assert!((el - Complex64::new(expected, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn interaction_is_hermitian_and_conserves_excitation() {
        for n_max in 1..=8 {
            let layout = SpaceLayout::new(n_max);
            let v = build_interaction(&layout, 0.628).unwrap();
            assert!(v.hermiticity_error() < 1e-14);
            let n_exc = total_excitation(&layout);
            let comm = v.mul(&n_exc).sub(&n_exc.mul(&v));
            assert!(comm.max_abs() < 1e-12, "n_max = {n_max}");
        }
    }

    #[test]
    fn interaction_is_symmetric_under_qubit_swap() {
        let layout = SpaceLayout::new(5);
        let v = build_interaction(&layout, 0.628).unwrap();
        let d = layout.total_dim();
        let mut swap = CMatrix::zeros(d, d);
        for a in 0..2 {
            for b in 0..2 {
                for n in 0..layout.resonator_dim() {
                    swap.set(layout.index(b, a, n), layout.index(a, b, n), Complex64::ONE);
                }
            }
        }
        let swapped = swap.mul(&v).mul(&swap.adjoint());
        assert!(swapped.max_abs_diff(&v) < 1e-14);
    }

    #[test]
    fn generator_has_expected_channels() {
        use std::f64::consts::TAU;
        let params = PhysicalParams {
            g: TAU * 0.1,
            kappa: TAU * 1e-3,
            gamma: TAU * 1.6e-4,
            gamma_phi: TAU * 1.58e-2,
            n_max: 5,
        };
        let gen = build_generator(&params).unwrap();
        let rates: Vec<f64> = gen.channels().iter().map(|ch| ch.rate).collect();
        let expected = [
            TAU * 1.58e-2,
            TAU * 1.58e-2,
            TAU * 1.6e-4,
            TAU * 1.6e-4,
            TAU * 1e-3,
        ];
        assert_eq!(rates.len(), 5);
        for (r, e) in rates.iter().zip(expected) {
            assert!((r - e).abs() < 1e-15);
        }
        let forms: Vec<ChannelForm> = gen.channels().iter().map(|ch| ch.form).collect();
        assert_eq!(
            forms,
            vec![
                ChannelForm::Dephasing,
                ChannelForm::Dephasing,
                ChannelForm::Standard,
                ChannelForm::Standard,
                ChannelForm::Standard,
            ]
        );

        // Hamiltonian equals the interaction builder output entrywise.
        let v = build_interaction(&params.layout(), params.g).unwrap();
        assert_eq!(gen.hamiltonian().max_abs_diff(&v), 0.0);

        // Each jump operator acts on exactly one subsystem: it commutes with
        // σ_z embedded on every other subsystem-label operator.
        let layout = params.layout();
        let labels = [
            embed_op(&layout, Site::QubitA, &pauli_z()).unwrap(),
            embed_op(&layout, Site::QubitB, &pauli_z()).unwrap(),
            embed_op(
                &layout,
                Site::Resonator,
                &number_operator(layout.resonator_dim()),
            )
            .unwrap(),
        ];
        let sites = [
            Site::QubitA,
            Site::QubitB,
            Site::QubitA,
            Site::QubitB,
            Site::Resonator,
        ];
        for (ch, &site) in gen.channels().iter().zip(&sites) {
            for (label_site, label) in [Site::QubitA, Site::QubitB, Site::Resonator]
                .iter()
                .zip(&labels)
            {
                if *label_site != site {
                    let comm = ch.jump.mul(label).sub(&label.mul(&ch.jump));
                    assert!(comm.max_abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn zero_rate_generator_keeps_channel_list() {
        let params = PhysicalParams {
            g: 0.0,
            kappa: 0.0,
            gamma: 0.0,
            gamma_phi: 0.0,
            n_max: 2,
        };
        let gen = build_generator(&params).unwrap();
        assert_eq!(gen.channels().len(), 5);
        assert!(gen.channels().iter().all(|ch| ch.rate == 0.0));
        assert_eq!(gen.hamiltonian().max_abs(), 0.0);
    }

    #[test]
    fn qubit_gap_cases() {
        assert!((qubit_gap(0.0, 1.7) - 3.4).abs() < 1e-15);
        assert!((qubit_gap(-2.5, 0.0) - 2.5).abs() < 1e-15);
        assert!((qubit_gap(3.0, 2.0) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn coupling_coefficient_scaling_and_reference() {
        let base = coupling_coefficient(1.0, 2.0, 4.0, 9.0, 1.0, 1.0).unwrap();
        // Hand evaluation: (1·2 / (2·4)) · √(9 / 1) = 0.25 · 3 = 0.75.
        assert!((base - 0.75).abs() < 1e-15);

        // Linear in C_c.
        let doubled = coupling_coefficient(1.0, 4.0, 4.0, 9.0, 1.0, 1.0).unwrap();
        assert!((doubled - 2.0 * base).abs() < 1e-15);

        // Square-root scaling in ω₀.
        let quad = coupling_coefficient(1.0, 2.0, 4.0, 36.0, 1.0, 1.0).unwrap();
        assert!((quad - 2.0 * base).abs() < 1e-15);

        // Inverse-linear in C_tot.
        let halved = coupling_coefficient(1.0, 2.0, 8.0, 9.0, 1.0, 1.0).unwrap();
        assert!((halved - 0.5 * base).abs() < 1e-15);

        // Second hand-evaluated tuple: (2·3 / (2·5)) · √(8 / 8) = 0.6.
        let other = coupling_coefficient(2.0, 3.0, 5.0, 8.0, 2.0, 4.0).unwrap();
        assert!((other - 0.6).abs() < 1e-15);

        assert!(coupling_coefficient(0.0, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(coupling_coefficient(1.0, 1.0, -1.0, 1.0, 1.0, 1.0).is_err());
    }
}
