//! Exponential phase shift on the Fock space and on the doubled space.
//!
//! On the ordinary number basis the shift `E|n> = |n-1>`, `E|0> = 0` is only
//! an isometry: `E†E = 1 - |0><0|`. The doubled space indexes states by
//! `n = -N, ..., N-1`; labels `n >= 0` form the `plus` half and `n < 0` the
//! `minus` half. The two-sided shift `n -> n-1` (closing `-N -> N-1`) carries
//! the plus vacuum into the minus half and is a permutation, hence unitary.
//! The Hamiltonian is block diagonal, `omega (n + 1/2)` on `plus` and the
//! mirrored `omega (-n - 1/2)` on `minus`, so each half evolves on its own and
//! the measured phase advances as `+omega t` in `plus`, `-omega t` in `minus`.
//!
//! The wrap between `-N` and `N-1` has no physical content; states used for
//! physical statements should keep at least two empty levels next to it.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::fock::{self, FockBasis};
use crate::linalg::{Basis, OperatorMatrix, StateVector};
use crate::{math, Error, Result};

/// `|<E>|` below which the phase is reported as undefined.
pub const PHASE_MAGNITUDE_TOL: f64 = 1e-12;

/// Eigenvalue magnitude counted toward the rank of an isometry defect.
pub const DEFECT_RANK_TOL: f64 = 1e-10;

/// Half of the doubled space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subspace {
    Plus,
    Minus,
}

impl Subspace {
    /// Sign of the phase flow, `Phi = sign * omega * t`.
    pub fn sign(self) -> f64 {
        match self {
            Subspace::Plus => 1.0,
            Subspace::Minus => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Subspace::Plus => "plus",
            Subspace::Minus => "minus",
        }
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Two-sided index set `-N..N-1`, stored at positions `label + N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DoubledBasis {
    half_dim: usize,
    cyclic: bool,
}

impl DoubledBasis {
    pub fn new(half_dim: usize, cyclic: bool) -> Result<Self> {
        if half_dim == 0 {
            return Err(Error::InvalidBasis("doubled basis needs half_dim >= 1"));
        }
        Ok(DoubledBasis { half_dim, cyclic })
    }

    pub fn half_dim(&self) -> usize {
        self.half_dim
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn dim(&self) -> usize {
        2 * self.half_dim
    }

    pub fn label(&self, position: usize) -> i64 {
        position as i64 - self.half_dim as i64
    }

    pub fn position(&self, label: i64) -> Option<usize> {
        let n = self.half_dim as i64;
        (-n..n).contains(&label).then(|| (label + n) as usize)
    }

    pub fn subspace(&self, position: usize) -> Subspace {
        if position >= self.half_dim {
            Subspace::Plus
        } else {
            Subspace::Minus
        }
    }

    /// Orthogonal projector onto one half.
    pub fn projector(&self, half: Subspace) -> OperatorMatrix {
        let diag: Vec<f64> = (0..self.dim())
            .map(|p| if self.subspace(p) == half { 1.0 } else { 0.0 })
            .collect();
        OperatorMatrix::from_diagonal(*self, &diag).expect("diagonal has basis length")
    }

    /// Places a Fock state into one half: `|n>` goes to label `n` in `plus`
    /// and to the mirror label `-n-1` in `minus`.
    pub fn embed(&self, psi: &StateVector, half: Subspace) -> Result<StateVector> {
        let Basis::Fock(fb) = psi.basis() else {
            return Err(Error::InvalidBasis("embed expects a Fock-space state"));
        };
        if fb.dim() > self.half_dim {
            return Err(Error::DimensionMismatch {
                expected: self.half_dim,
                found: fb.dim(),
            });
        }
        let mut amps = alloc::vec![Complex64::new(0.0, 0.0); self.dim()];
        for (n, z) in psi.amplitudes().iter().enumerate() {
            let label = match half {
                Subspace::Plus => n as i64,
                Subspace::Minus => -(n as i64) - 1,
            };
            amps[self.position(label).expect("label inside range")] = *z;
        }
        StateVector::new(*self, amps)
    }

    /// Image of a state under the label reflection `n -> -n-1`.
    pub fn mirror(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.basis() != Basis::Doubled(*self) {
            return Err(Error::InvalidBasis("state is not on this doubled basis"));
        }
        let amps: Vec<Complex64> = (0..self.dim())
            .map(|p| psi.amplitudes()[self.dim() - 1 - p])
            .collect();
        StateVector::new(*self, amps)
    }

    /// The half carrying all of `psi`'s weight, or [`Error::MixedSupport`].
    pub fn support(&self, psi: &StateVector) -> Result<Subspace> {
        let mut weight = [0.0_f64; 2];
        for (p, z) in psi.amplitudes().iter().enumerate() {
            weight[(self.subspace(p) == Subspace::Plus) as usize] += z.norm_sqr();
        }
        let [minus, plus] = weight;
        match (plus > 0.0, minus > 0.0) {
            (true, false) => Ok(Subspace::Plus),
            (false, true) => Ok(Subspace::Minus),
            _ => Err(Error::MixedSupport),
        }
    }
}

/// One-sided lowering shift `E|n> = |n-1>`, `E|0> = 0`.
pub fn sg_phase_operator(basis: FockBasis) -> OperatorMatrix {
    OperatorMatrix::from_fn(basis, |i, j| {
        if j == i + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Where and how much `E†E` departs from the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport {
    /// Operator 2-norm of `E†E - I`.
    pub norm: f64,
    pub rank: usize,
    /// Storage positions whose row or column of `E†E - I` is nonzero.
    pub support: Vec<usize>,
}

pub fn isometry_defect(e: &OperatorMatrix) -> DefectReport {
    let dim = e.dim();
    let defect = e.entries().adjoint() * e.entries() - DMatrix::<Complex64>::identity(dim, dim);
    // E†E - I is Hermitian by construction; symmetrize away rounding first
    let herm = (&defect + defect.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let norm = eig.eigenvalues.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let rank = eig
        .eigenvalues
        .iter()
        .filter(|v| v.abs() > DEFECT_RANK_TOL)
        .count();
    let support = (0..dim)
        .filter(|&i| {
            (0..dim).any(|j| math::modulus(defect[(i, j)]) > DEFECT_RANK_TOL || math::modulus(defect[(j, i)]) > DEFECT_RANK_TOL)
        })
        .collect();
    DefectReport {
        norm,
        rank,
        support,
    }
}

/// Two-sided shift `n -> n-1` with the wrap `-N -> N-1`.
pub fn extended_phase_operator(basis: DoubledBasis) -> Result<OperatorMatrix> {
    if !basis.is_cyclic() {
        return Err(Error::Unsupported(
            "the two-sided shift is unitary only on a cyclic doubled basis",
        ));
    }
    let dim = basis.dim();
    // column p (label n) has its single 1 in the row of label n-1
    Ok(OperatorMatrix::from_fn(basis, |i, j| {
        if i == (j + dim - 1) % dim {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Block-diagonal Hamiltonian: `omega (n + 1/2)` for `n >= 0` and the
/// mirrored `omega (-n - 1/2)` for `n < 0`.
pub fn extended_hamiltonian(basis: DoubledBasis, omega: f64) -> Result<OperatorMatrix> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::param("omega", "must be positive"));
    }
    let diag: Vec<f64> = (0..basis.dim())
        .map(|p| {
            let n = basis.label(p) as f64;
            if n >= 0.0 {
                omega * (n + 0.5)
            } else {
                omega * (-n - 0.5)
            }
        })
        .collect();
    OperatorMatrix::from_diagonal(basis, &diag)
}

/// Measured phase `arg <psi|E†|psi>` in `[0, 2pi)`.
pub fn phase_expectation(psi: &StateVector, e: &OperatorMatrix) -> Result<f64> {
    let mean = fock::expectation(e, psi)?.conj();
    if math::modulus(mean) <= PHASE_MAGNITUDE_TOL {
        return Err(Error::UndefinedPhase { sample: None });
    }
    Ok(wrap_phase(math::arg(mean)))
}

/// Maps an angle into `[0, 2pi)`.
pub fn wrap_phase(phi: f64) -> f64 {
    // adding zero turns -0.0 into +0.0
    let w = math::rem_euclid(phi, TAU) + 0.0;
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// `tan(Phi/2)`, which sweeps `(-inf, +inf)` once per period.
pub fn half_angle_tangent(phi: f64) -> f64 {
    math::tan(phi / 2.0)
}

/// Sampled phase of a state evolving inside one half of the doubled space.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTrajectory {
    pub times: Vec<f64>,
    /// Wrapped phase in `[0, 2pi)`.
    pub phase_values: Vec<f64>,
    pub subspace: Subspace,
}

impl PhaseTrajectory {
    /// Phase with `2pi` jumps between consecutive samples removed.
    pub fn unwrapped(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.phase_values.len());
        let mut offset = 0.0;
        let mut prev: Option<f64> = None;
        for &phi in &self.phase_values {
            if let Some(p) = prev {
                let d = phi - p;
                if d > PI {
                    offset -= TAU;
                } else if d < -PI {
                    offset += TAU;
                }
            }
            out.push(phi + offset);
            prev = Some(phi);
        }
        out
    }

    /// Least-squares slope of the unwrapped phase against time.
    pub fn fitted_slope(&self) -> f64 {
        let y = self.unwrapped();
        let n = self.times.len() as f64;
        let tm = self.times.iter().sum::<f64>() / n;
        let ym = y.iter().sum::<f64>() / n;
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for (t, v) in self.times.iter().zip(&y) {
            sxy += (t - tm) * (v - ym);
            sxx += (t - tm) * (t - tm);
        }
        sxy / sxx
    }
}

/// Evolves `psi0` under [`extended_hamiltonian`] and records the phase.
pub fn phase_trajectory(
    basis: DoubledBasis,
    omega: f64,
    psi0: &StateVector,
    times: &[f64],
) -> Result<PhaseTrajectory> {
    if psi0.basis() != Basis::Doubled(basis) {
        return Err(Error::InvalidBasis("initial state is not on the doubled basis"));
    }
    let subspace = basis.support(psi0)?;
    let h = extended_hamiltonian(basis, omega)?;
    let e = extended_phase_operator(basis)?;
    let phase_values = times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let psi = fock::evolve(&h, psi0, t)?;
            phase_expectation(&psi, &e).map_err(|err| match err {
                Error::UndefinedPhase { .. } => Error::UndefinedPhase { sample: Some(i) },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseTrajectory {
        times: times.to_vec(),
        phase_values,
        subspace,
    })
}
