//! Self-contained dense complex linear algebra for small Hilbert spaces.
//!
//! Everything here is sized for dimensions of a few dozen (the composite
//! space of two qubits and a truncated bosonic mode is 24-dimensional), so
//! simplicity and reproducibility win over BLAS-grade performance: matrices
//! are plain row-major `Vec<Complex64>` and the eigensolver is cyclic Jacobi.

use num_complex::Complex64;

use crate::{Error, Result};

mod eig;

pub use eig::{herm_eig, matrix_sqrt_psd, HermEigResult, JACOBI_MAX_SWEEPS, JACOBI_OFF_TOL};

/// Largest matrix dimension `kron` will produce. Guards against accidental
/// blow-up when composing spaces; the shipped model needs 24.
pub const MAX_KRON_DIM: usize = 1 << 12;

/// Eigenvalues of a PSD-by-construction matrix may round slightly negative;
/// below this they signal a genuine loss of positivity and are an error.
pub const PSD_CLAMP_TOL: f64 = 1e-10;

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Build from row-major entries. Rejects length mismatches and non-finite
    /// entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState(
                "matrix entries must be finite".to_string(),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::ONE;
        }
        m
    }

    /// Rank-one matrix |v><w|.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        let mut m = Self::zeros(v.len(), w.len());
        for (i, vi) in v.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                m.data[i * w.len() + j] = vi * wj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.cols + j] = value;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn fill_zero(&mut self) {
        self.data.fill(Complex64::ZERO);
    }

    pub fn copy_from(&mut self, src: &CMatrix) {
        assert_eq!((self.rows, self.cols), (src.rows, src.cols));
        self.data.copy_from_slice(&src.data);
    }

    /// self += factor · other, without allocating.
    pub fn add_scaled(&mut self, other: &CMatrix, factor: f64) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += factor * b;
        }
    }

    /// self = a + factor · b, without allocating.
    pub fn assign_sum_scaled(&mut self, a: &CMatrix, b: &CMatrix, factor: f64) {
        assert_eq!((self.rows, self.cols), (a.rows, a.cols));
        assert_eq!((self.rows, self.cols), (b.rows, b.cols));
        for ((o, x), y) in self.data.iter_mut().zip(&a.data).zip(&b.data) {
            *o = x + factor * y;
        }
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.at(i, i)).sum()
    }

    /// Tr(A B) without forming the product.
    pub fn trace_of_product(&self, other: &CMatrix) -> Complex64 {
        assert_eq!(self.cols, other.rows, "trace_of_product dim mismatch");
        assert_eq!(self.rows, other.cols, "trace_of_product dim mismatch");
        let mut acc = Complex64::ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self.at(i, k) * other.at(k, i);
            }
        }
        acc
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.at(i, j).conj();
            }
        }
        m
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matvec dim mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .sum::<Complex64>()
            })
            .collect()
    }

    pub fn mul(&self, other: &CMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dim mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::ZERO {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Largest |entry|.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest |a - b| entry.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max |A - A†| entry; 0 for exactly Hermitian matrices.
    pub fn hermiticity_error(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self.at(i, j) - self.at(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_error() <= tol
    }

    /// (A + A†) / 2, in place.
    pub fn hermitize(&mut self) {
        debug_assert!(self.is_square());
        let n = self.rows;
        for i in 0..n {
            let d = self.data[i * n + i];
            self.data[i * n + i] = Complex64::new(d.re, 0.0);
            for j in (i + 1)..n {
                let upper = self.data[i * n + j];
                let lower = self.data[j * n + i];
                let avg = 0.5 * (upper + lower.conj());
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg.conj();
            }
        }
    }

    pub fn all_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Kronecker product: `(a ⊗ b)[(i·p + k), (j·q + l)] = a[i,j] · b[k,l]`
/// where `b` is p×q.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let rows = a.rows.saturating_mul(b.rows);
    let cols = a.cols.saturating_mul(b.cols);
    if rows > MAX_KRON_DIM || cols > MAX_KRON_DIM {
        return Err(Error::DimOverflow {
            dim: rows.max(cols),
            max: MAX_KRON_DIM,
        });
    }
    let mut out = CMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a.at(i, j);
            if aij == Complex64::ZERO {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out.set(i * b.rows + k, j * b.cols + l, aij * b.at(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Tensor product of state vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Partial trace of a density operator on a tensor-product space.
///
/// `dims` lists the subsystem dimensions in tensor order, `keep` the
/// (strictly increasing) subsystem indices retained. The result is ordered by
/// the kept subsystems in their original order.
pub fn partial_trace(rho: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    let total: usize = dims.iter().product();
    if !rho.is_square() || rho.rows() != total {
        return Err(Error::DimMismatch(format!(
            "partial_trace: state is {}x{} but subsystem dims {:?} give total {}",
            rho.rows(),
            rho.cols(),
            dims,
            total
        )));
    }
    if keep.is_empty() {
        return Err(Error::InvalidParam(
            "partial_trace: keep set must be non-empty".to_string(),
        ));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || *keep.last().unwrap() >= dims.len() {
        return Err(Error::InvalidParam(format!(
            "partial_trace: keep set {:?} must be strictly increasing indices into {:?}",
            keep, dims
        )));
    }

    // Stride of each subsystem in the flattened composite index.
    let mut strides = vec![1usize; dims.len()];
    for s in (0..dims.len().saturating_sub(1)).rev() {
        strides[s] = strides[s + 1] * dims[s + 1];
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|s| !keep.contains(s)).collect();

    // Composite-index offsets contributed by every multi-index over a
    // subsystem subset. Offsets of disjoint subsets add.
    let offsets = |subset: &[usize]| -> Vec<usize> {
        let mut out = vec![0usize];
        for &s in subset {
            let mut next = Vec::with_capacity(out.len() * dims[s]);
            for &base in &out {
                for d in 0..dims[s] {
                    next.push(base + d * strides[s]);
                }
            }
            out = next;
        }
        out
    };
    let keep_offsets = offsets(keep);
    let traced_offsets = offsets(&traced);

    let dk = keep_offsets.len();
    let mut out = CMatrix::zeros(dk, dk);
    for (i, &oi) in keep_offsets.iter().enumerate() {
        for (j, &oj) in keep_offsets.iter().enumerate() {
            let mut acc = Complex64::ZERO;
            for &om in &traced_offsets {
                acc += rho.at(oi + om, oj + om);
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Deterministic pseudo-random matrix for tests (plain LCG; no rand dep
    /// needed at this level).
    fn test_matrix(rows: usize, cols: usize, seed: u64) -> CMatrix {
        let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1);
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            // Map the top 53 bits onto [-1, 1).
            ((state >> 11) as f64 / (1u64 << 52) as f64) - 1.0
        };
        let data = (0..rows * cols).map(|_| c(next(), next())).collect();
        CMatrix::from_vec(rows, cols, data).unwrap()
    }

    fn test_hermitian(dim: usize, seed: u64) -> CMatrix {
        let a = test_matrix(dim, dim, seed);
        let mut h = a.add(&a.adjoint()).scale(c(0.5, 0.0));
        h.hermitize();
        h
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let result = kron(&CMatrix::identity(2), &CMatrix::identity(3)).unwrap();
        assert_eq!(result, CMatrix::identity(6));
    }

    #[test]
    fn kron_dims_multiply() {
        let a = test_matrix(2, 2, 1);
        let b = test_matrix(3, 3, 2);
        let k = kron(&a, &b).unwrap();
        assert_eq!((k.rows(), k.cols()), (6, 6));
    }

    #[test]
    fn kron_rejects_oversized_result() {
        let a = CMatrix::identity(MAX_KRON_DIM / 2 + 1);
        let b = CMatrix::identity(2);
        assert!(matches!(kron(&a, &b), Err(Error::DimOverflow { .. })));
    }

    /// Index-formula oracle: check the defining formula entry by entry, then
    /// the mixed-product identity (A⊗B)(C⊗D) = (AC)⊗(BD).
    #[test]
    fn kron_matches_index_formula_and_mixed_product() {
        let a = test_matrix(2, 2, 3);
        let b = test_matrix(2, 2, 4);
        let k = kron(&a, &b).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        let expected = a.at(i, j) * b.at(p, q);
                        assert!((k.at(i * 2 + p, j * 2 + q) - expected).norm() < 1e-15);
                    }
                }
            }
        }

        let cm = test_matrix(2, 2, 5);
        let d = test_matrix(2, 2, 6);
        let lhs = kron(&a, &b).unwrap().mul(&kron(&cm, &d).unwrap());
        let rhs = kron(&a.mul(&cm), &b.mul(&d)).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_state_recovers_factor() {
        // rho_AB ⊗ |1><1|_r, traced over r, gives back rho_AB.
        let rho_ab = {
            let a = test_matrix(4, 4, 7);
            let h = a.mul(&a.adjoint());
            let tr = h.trace().re;
            h.scale(c(1.0 / tr, 0.0))
        };
        let mut fock1 = CMatrix::zeros(3, 3);
        fock1.set(1, 1, Complex64::ONE);
        let full = kron(&rho_ab, &fock1).unwrap();
        let reduced = partial_trace(&full, &[2, 2, 3], &[0, 1]).unwrap();
        assert!(reduced.max_abs_diff(&rho_ab) < 1e-14);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let inv = 1.0 / f64::sqrt(2.0);
        let phi_plus = [c(inv, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(inv, 0.0)];
        let rho = CMatrix::outer(&phi_plus, &phi_plus);
        let reduced = partial_trace(&rho, &[2, 2], &[0]).unwrap();
        let expected = CMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(reduced.max_abs_diff(&expected) < 1e-15);
    }

    /// Brute-force index-summation oracle on the full 24-dimensional space.
    #[test]
    fn partial_trace_matches_index_sum_oracle_on_24_dim() {
        let dims = [2usize, 2, 6];
        let rho = test_hermitian(24, 8);

        // Oracle: explicit sum over the traced index, written against the
        // flattened index map directly.
        let idx = |a: usize, b: usize, n: usize| a * 12 + b * 6 + n;
        let mut expected = CMatrix::zeros(4, 4);
        for a in 0..2 {
            for b in 0..2 {
                for ap in 0..2 {
                    for bp in 0..2 {
                        let mut acc = Complex64::ZERO;
                        for n in 0..6 {
                            acc += rho.at(idx(a, b, n), idx(ap, bp, n));
                        }
                        expected.set(a * 2 + b, ap * 2 + bp, acc);
                    }
                }
            }
        }
        let got = partial_trace(&rho, &dims, &[0, 1]).unwrap();
        assert!(got.max_abs_diff(&expected) < 1e-12);

        // Also check a middle-subsystem keep against the same oracle style.
        let mut expected_b = CMatrix::zeros(2, 2);
        for b in 0..2 {
            for bp in 0..2 {
                let mut acc = Complex64::ZERO;
                for a in 0..2 {
                    for n in 0..6 {
                        acc += rho.at(idx(a, b, n), idx(a, bp, n));
                    }
                }
                expected_b.set(b, bp, acc);
            }
        }
        let got_b = partial_trace(&rho, &dims, &[1]).unwrap();
        assert!(got_b.max_abs_diff(&expected_b) < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_inputs() {
        let rho = CMatrix::identity(6);
        assert!(partial_trace(&rho, &[2, 3], &[0]).is_ok());
        let rho_bad = CMatrix::identity(7);
        assert!(matches!(
            partial_trace(&rho_bad, &[2, 3], &[0]),
            Err(Error::DimMismatch(_))
        ));
        assert!(matches!(
            partial_trace(&rho, &[2, 3], &[]),
            Err(Error::InvalidParam(_))
        ));
        assert!(matches!(
            partial_trace(&rho, &[2, 3], &[2]),
            Err(Error::InvalidParam(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        /// kron(αA + βB, C) = α·kron(A,C) + β·kron(B,C)
        #[test]
        fn kron_is_bilinear(seed_a in 0u64..1000, seed_b in 1000u64..2000,
                            alpha in -2.0f64..2.0, beta in -2.0f64..2.0) {
            let a = test_matrix(2, 3, seed_a);
            let b = test_matrix(2, 3, seed_b);
            let cmat = test_matrix(3, 2, seed_a.wrapping_add(seed_b));
            let al = c(alpha, 0.5 * beta);
            let be = c(beta, -0.25 * alpha);
            let lhs = kron(&a.scale(al).add(&b.scale(be)), &cmat).unwrap();
            let rhs = kron(&a, &cmat).unwrap().scale(al)
                .add(&kron(&b, &cmat).unwrap().scale(be));
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        /// Linearity and trace preservation of the partial trace.
        #[test]
        fn partial_trace_linear_and_trace_preserving(seed in 0u64..5000) {
            let h1 = test_hermitian(12, seed);
            let h2 = test_hermitian(12, seed.wrapping_add(77));
            let dims = [2usize, 3, 2];
            let t1 = partial_trace(&h1, &dims, &[0, 2]).unwrap();
            let t2 = partial_trace(&h2, &dims, &[0, 2]).unwrap();
            let tsum = partial_trace(&h1.add(&h2), &dims, &[0, 2]).unwrap();
            prop_assert!(tsum.max_abs_diff(&t1.add(&t2)) < 1e-12);
            prop_assert!((t1.trace() - h1.trace()).norm() < 1e-12);
        }
    }
}
