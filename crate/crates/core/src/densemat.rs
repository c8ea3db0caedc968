//! Small dense complex-matrix kernel.
//!
//! This is the exactness oracle the rest of the crate is checked against:
//! construction, products, tensor products, adjoints, commutators, exact
//! spectral norms (full SVD), and the DFT matrix. Dimensions are capped at
//! desk scale; anything larger is a usage error, not a performance problem
//! to solve.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Hard cap on matrix dimension for oracle computations.
pub const DIM_GUARD: usize = 4096;

/// Dense complex matrix with f64 components.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    mat: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn from_matrix(mat: DMatrix<Complex64>) -> Self {
        Self { mat }
    }

    /// Row-major entry list; `entries.len()` must be `dim * dim`.
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Self {
        assert_eq!(entries.len(), dim * dim, "entry count mismatch");
        Self {
            mat: DMatrix::from_row_slice(dim, dim, entries),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let dim = values.len();
        let mut mat = DMatrix::zeros(dim, dim);
        for (i, &v) in values.iter().enumerate() {
            mat[(i, i)] = Complex64::new(v, 0.0);
        }
        Self { mat }
    }

    pub fn diag_complex(values: &[Complex64]) -> Self {
        let dim = values.len();
        let mut mat = DMatrix::zeros(dim, dim);
        for (i, &v) in values.iter().enumerate() {
            mat[(i, i)] = v;
        }
        Self { mat }
    }

    /// Cyclic shift |b⟩ ↦ |b+1 mod d⟩.
    pub fn shift(dim: usize, by: i64) -> Self {
        let mut mat = DMatrix::zeros(dim, dim);
        let d = dim as i64;
        for b in 0..d {
            let target = (b + by).rem_euclid(d);
            mat[(target as usize, b as usize)] = Complex64::new(1.0, 0.0);
        }
        Self { mat }
    }

    /// Unitary DFT, entries ω^{jk}/√d with ω = e^{2πi/d}.
    pub fn fourier(dim: usize) -> Self {
        let d = dim as f64;
        let scale = 1.0 / d.sqrt();
        let mut mat = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            for k in 0..dim {
                let phase = 2.0 * std::f64::consts::PI * (j * k) as f64 / d;
                mat[(j, k)] = Complex64::from_polar(scale, phase);
            }
        }
        Self { mat }
    }

    /// Sylvester clock matrix diag(1, ω, ω², …) with ω = e^{2πi/d}.
    pub fn clock(dim: usize) -> Self {
        let d = dim as f64;
        let values: Vec<Complex64> = (0..dim)
            .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / d))
            .collect();
        Self::diag_complex(&values)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.mat[(row, col)] = value;
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            mat: &self.mat * factor,
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dim mismatch in add");
        Self {
            mat: &self.mat + &other.mat,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dim mismatch in sub");
        Self {
            mat: &self.mat - &other.mat,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dim mismatch in mul");
        Self {
            mat: &self.mat * &other.mat,
        }
    }

    /// Kronecker product, `self` on the most significant factor.
    pub fn kron(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.kronecker(&other.mat),
        }
    }

    /// AB − BA.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(self.dim(), other.dim()));
        }
        Ok(Self {
            mat: &self.mat * &other.mat - &other.mat * &self.mat,
        })
    }

    /// Largest singular value via full SVD.
    pub fn spectral_norm(&self) -> Result<f64> {
        if self.dim() > DIM_GUARD {
            return Err(Error::Guard(format!(
                "spectral_norm dim {} exceeds {}",
                self.dim(),
                DIM_GUARD
            )));
        }
        if self.dim() == 0 {
            return Ok(0.0);
        }
        let sv = self.mat.clone().singular_values();
        Ok(sv.iter().cloned().fold(0.0, f64::max))
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.mat.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dim mismatch in compare");
        (&self.mat - &other.mat)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = self.mul(&self.adjoint());
        prod.max_abs_diff(&Self::identity(self.dim())) <= tol
    }

    /// exp(iθH) for Hermitian H, via eigendecomposition.
    pub fn exp_i_hermitian(&self, theta: f64) -> Result<Self> {
        if !self.is_hermitian(1e-8) {
            return Err(Error::InvalidParams(
                "exp_i_hermitian requires a Hermitian matrix".into(),
            ));
        }
        let eig = self.mat.clone().symmetric_eigen();
        let dim = self.dim();
        let mut phases = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            phases[(i, i)] = Complex64::from_polar(1.0, theta * eig.eigenvalues[i]);
        }
        let v = eig.eigenvectors;
        Ok(Self {
            mat: &v * phases * v.adjoint(),
        })
    }

    /// Entries as row-major [re, im] pairs, for JSON dumps.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.dim())
            .map(|r| (0..self.dim()).map(|c| [self.mat[(r, c)].re, self.mat[(r, c)].im]).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TOL_MAT;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> DenseOperator {
        DenseOperator::from_rows(2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    fn pauli_y() -> DenseOperator {
        DenseOperator::from_rows(2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
    }

    fn pauli_z() -> DenseOperator {
        DenseOperator::diag_real(&[1.0, -1.0])
    }

    #[test]
    fn norm_of_identity_is_one() {
        assert!((DenseOperator::identity(5).spectral_norm().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn norm_of_diagonal_is_max_abs() {
        let a = DenseOperator::diag_real(&[0.0, 3.0, -5.0]);
        assert!((a.spectral_norm().unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn norm_is_multiplicative_over_kron() {
        // ‖A⊗B‖ = ‖A‖·‖B‖ (SVD of a Kronecker product factorizes).
        let a = DenseOperator::from_rows(
            3,
            &[
                c(0.3, 0.1), c(-1.2, 0.0), c(0.5, -0.7),
                c(2.0, 0.4), c(0.0, 0.9), c(-0.3, 0.2),
                c(1.1, -1.0), c(0.6, 0.0), c(0.8, 0.3),
            ],
        );
        let b = DenseOperator::from_rows(
            3,
            &[
                c(-0.4, 0.2), c(0.9, 1.1), c(0.0, -0.6),
                c(1.3, 0.0), c(-0.2, 0.5), c(0.7, 0.1),
                c(0.0, 0.8), c(-1.5, 0.0), c(0.4, -0.3),
            ],
        );
        let lhs = a.kron(&b).spectral_norm().unwrap();
        let rhs = a.spectral_norm().unwrap() * b.spectral_norm().unwrap();
        assert!((lhs - rhs).abs() < 1e-9 * rhs.max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn commutator_with_self_vanishes() {
        let a = pauli_y();
        assert!(a.commutator(&a).unwrap().max_abs_entry() < 1e-15);
    }

    #[test]
    fn pauli_commutator_z_x() {
        // [Z, X] = 2iY
        let comm = pauli_z().commutator(&pauli_x()).unwrap();
        let expect = pauli_y().scale(c(0.0, 2.0));
        assert!(comm.max_abs_diff(&expect) < TOL_MAT);
    }

    #[test]
    fn commutator_of_two_factor_tensors() {
        // [A1⊗A2, B1⊗B2] = [A1,B1]⊗A2B2 + B1A1⊗[A2,B2]
        let a1 = DenseOperator::from_rows(2, &[c(0.2, 0.0), c(1.0, 0.5), c(1.0, -0.5), c(-0.8, 0.0)]);
        let a2 = pauli_x();
        let b1 = pauli_z();
        let b2 = DenseOperator::from_rows(2, &[c(1.5, 0.0), c(0.0, 2.0), c(0.0, -2.0), c(0.3, 0.0)]);
        let lhs = a1.kron(&a2).commutator(&b1.kron(&b2)).unwrap();
        let rhs = a1
            .commutator(&b1)
            .unwrap()
            .kron(&a2.mul(&b2))
            .add(&b1.mul(&a1).kron(&a2.commutator(&b2).unwrap()));
        assert!(lhs.max_abs_diff(&rhs) < TOL_MAT);
    }

    #[test]
    fn fourier_d2_is_hadamard() {
        let f = DenseOperator::fourier(2);
        let s = 1.0 / 2f64.sqrt();
        let h = DenseOperator::from_rows(2, &[c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)]);
        assert!(f.max_abs_diff(&h) < 1e-12);
    }

    #[test]
    fn fourier_is_unitary() {
        assert!(DenseOperator::fourier(8).is_unitary(1e-12));
    }

    #[test]
    fn fourier_conjugation_of_clock_gives_shift() {
        // F† C F is the cyclic raise |b⟩ ↦ |b+1⟩.
        for d in [2usize, 4, 8] {
            let f = DenseOperator::fourier(d);
            let got = f.adjoint().mul(&DenseOperator::clock(d)).mul(&f);
            assert!(got.max_abs_diff(&DenseOperator::shift(d, 1)) < 1e-12, "d={d}");
        }
    }

    #[test]
    fn exp_of_z_matches_phases() {
        let z = pauli_z();
        let got = z.exp_i_hermitian(0.7).unwrap();
        let expect = DenseOperator::diag_complex(&[
            Complex64::from_polar(1.0, 0.7),
            Complex64::from_polar(1.0, -0.7),
        ]);
        assert!(got.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn dimension_guard_trips() {
        assert!(DenseOperator::zeros(DIM_GUARD + 1).spectral_norm().is_err());
    }
}
