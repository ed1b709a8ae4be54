//! Dense complex operators and normalized states tagged with their basis.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::fock::FockBasis;
use crate::math;
use crate::phase::DoubledBasis;
use crate::{Error, Result};

/// Conjugate-symmetry tolerance used when tagging an operator as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-14;

/// Relative tolerance on `<psi|psi>` accepted as "normalized".
pub const NORM_TOL: f64 = 1e-9;

/// The finite basis an operator or state lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Fock(FockBasis),
    Doubled(DoubledBasis),
}

impl Basis {
    pub fn dim(&self) -> usize {
        match self {
            Basis::Fock(b) => b.dim(),
            Basis::Doubled(b) => b.dim(),
        }
    }
}

impl From<FockBasis> for Basis {
    fn from(b: FockBasis) -> Self {
        Basis::Fock(b)
    }
}

impl From<DoubledBasis> for Basis {
    fn from(b: DoubledBasis) -> Self {
        Basis::Doubled(b)
    }
}

fn check_same(a: Basis, b: Basis) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        })
    }
}

/// Square complex matrix acting on a [`Basis`].
///
/// The Hermitian tag is computed on construction: an operator is tagged
/// Hermitian when every entry matches the conjugate of its transpose within
/// [`HERMITIAN_TOL`] (scaled by the largest entry when that exceeds one).
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    basis: Basis,
    entries: DMatrix<Complex64>,
    hermitian: bool,
}

impl OperatorMatrix {
    pub fn new(basis: impl Into<Basis>, entries: DMatrix<Complex64>) -> Result<Self> {
        let basis = basis.into();
        let dim = basis.dim();
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: entries.nrows().max(entries.ncols()),
            });
        }
        let hermitian = is_conjugate_symmetric(&entries);
        Ok(OperatorMatrix {
            basis,
            entries,
            hermitian,
        })
    }

    pub(crate) fn from_fn(
        basis: impl Into<Basis>,
        f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let basis = basis.into();
        let dim = basis.dim();
        let entries = DMatrix::from_fn(dim, dim, f);
        let hermitian = is_conjugate_symmetric(&entries);
        OperatorMatrix {
            basis,
            entries,
            hermitian,
        }
    }

    /// Real diagonal operator; always Hermitian.
    pub fn from_diagonal(basis: impl Into<Basis>, diagonal: &[f64]) -> Result<Self> {
        let basis = basis.into();
        if diagonal.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: diagonal.len(),
            });
        }
        Ok(Self::from_fn(basis, |i, j| {
            if i == j {
                Complex64::new(diagonal[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn identity(basis: impl Into<Basis>) -> Self {
        let basis = basis.into();
        let dim = basis.dim();
        OperatorMatrix {
            basis,
            entries: DMatrix::identity(dim, dim),
            hermitian: true,
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.entries[(i, j)] == Complex64::new(0.0, 0.0)))
    }

    pub fn adjoint(&self) -> Self {
        OperatorMatrix {
            basis: self.basis,
            entries: self.entries.adjoint(),
            hermitian: self.hermitian,
        }
    }

    pub fn product(&self, rhs: &OperatorMatrix) -> Result<Self> {
        check_same(self.basis, rhs.basis)?;
        Self::new(self.basis, &self.entries * &rhs.entries)
    }

    pub fn sum(&self, rhs: &OperatorMatrix) -> Result<Self> {
        check_same(self.basis, rhs.basis)?;
        Self::new(self.basis, &self.entries + &rhs.entries)
    }

    pub fn difference(&self, rhs: &OperatorMatrix) -> Result<Self> {
        check_same(self.basis, rhs.basis)?;
        Self::new(self.basis, &self.entries - &rhs.entries)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let entries = &self.entries * factor;
        let hermitian = is_conjugate_symmetric(&entries);
        OperatorMatrix {
            basis: self.basis,
            entries,
            hermitian,
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, z| acc.max(math::modulus(*z)))
    }

    /// Matrix-vector product; the result is generally not normalized.
    pub fn apply(&self, psi: &StateVector) -> Result<DVector<Complex64>> {
        check_same(self.basis, psi.basis)?;
        Ok(&self.entries * &psi.amplitudes)
    }

    /// Eigenvalues (ascending order not guaranteed) and eigenvectors as
    /// columns of a unitary matrix. Requires a Hermitian-tagged operator.
    pub fn hermitian_eigen(&self) -> Result<(DVector<f64>, DMatrix<Complex64>)> {
        if !self.hermitian {
            return Err(Error::NotHermitian);
        }
        let eig = self.entries.clone().symmetric_eigen();
        Ok((eig.eigenvalues, eig.eigenvectors))
    }
}

fn is_conjugate_symmetric(m: &DMatrix<Complex64>) -> bool {
    let scale = m.iter().fold(1.0_f64, |acc, z| acc.max(math::modulus(*z)));
    let tol = HERMITIAN_TOL * scale;
    let n = m.nrows();
    (0..n).all(|i| (i..n).all(|j| math::modulus(m[(i, j)] - m[(j, i)].conj()) <= tol))
}

/// Pure state on a [`Basis`]. Constructors normalize their input.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    basis: Basis,
    amplitudes: DVector<Complex64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes and rescales it to unit norm.
    pub fn new(basis: impl Into<Basis>, amplitudes: Vec<Complex64>) -> Result<Self> {
        let basis = basis.into();
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: amplitudes.len(),
            });
        }
        let mut v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::param("amplitudes", "state must have finite nonzero norm"));
        }
        v.unscale_mut(norm);
        Ok(StateVector {
            basis,
            amplitudes: v,
        })
    }

    /// Number (or doubled-index) basis state at storage position `index`.
    pub fn basis_state(basis: impl Into<Basis>, index: usize) -> Result<Self> {
        let basis = basis.into();
        if index >= basis.dim() {
            return Err(Error::param("index", "basis index out of range"));
        }
        let mut v = DVector::zeros(basis.dim());
        v[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            basis,
            amplitudes: v,
        })
    }

    /// Wraps amplitudes without renormalizing; used for unitary images.
    pub(crate) fn from_raw(basis: Basis, amplitudes: DVector<Complex64>) -> Self {
        StateVector { basis, amplitudes }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.amplitudes.as_slice()
    }

    pub(crate) fn vector(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        check_same(self.basis, other.basis)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub(crate) fn check_normalized(&self) -> Result<()> {
        let norm_sqr = self.amplitudes.norm_squared();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(())
    }
}
