//! Truncated Fock space of a single oscillator mode (units with hbar = 1).
//!
//! Ladder operators use the normalization `[a, a†] = 1` away from the
//! truncation edge, so `H = omega (N + 1/2)`. In a basis of `dim` levels the
//! commutator picks up a single defect `-(dim - 1)` at the top level; that
//! defect is a property of truncation and is kept visible rather than masked.

use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::linalg::{OperatorMatrix, StateVector};
use crate::math;
use crate::{Error, Result};

/// Largest Poisson weight a coherent state may lose beyond the top level.
pub const COHERENT_TAIL_TOL: f64 = 1e-10;

/// Number states `|0>, ..., |dim-1>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockBasis {
    dim: usize,
}

impl FockBasis {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidBasis("Fock basis needs at least two levels"));
        }
        Ok(FockBasis { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Annihilation, creation and number operators.
#[derive(Debug, Clone)]
pub struct Ladder {
    pub annihilation: OperatorMatrix,
    pub creation: OperatorMatrix,
    pub number: OperatorMatrix,
}

pub fn ladder_operators(basis: FockBasis) -> Ladder {
    let annihilation = OperatorMatrix::from_fn(basis, |i, j| {
        if j == i + 1 {
            Complex64::new(math::sqrt(j as f64), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let creation = annihilation.adjoint();
    let number = OperatorMatrix::from_fn(basis, |i, j| {
        if i == j {
            Complex64::new(i as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ladder {
        annihilation,
        creation,
        number,
    }
}

/// `H = omega (n + 1/2)` on the number basis.
pub fn oscillator_hamiltonian(basis: FockBasis, omega: f64) -> Result<OperatorMatrix> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::param("omega", "must be positive"));
    }
    let diag: Vec<f64> = (0..basis.dim())
        .map(|n| omega * (n as f64 + 0.5))
        .collect();
    OperatorMatrix::from_diagonal(basis, &diag)
}

/// `AB - BA`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    a.product(b)?.difference(&b.product(a)?)
}

/// `<psi|A|psi>` for a normalized state.
pub fn expectation(op: &OperatorMatrix, psi: &StateVector) -> Result<Complex64> {
    psi.check_normalized()?;
    let image = op.apply(psi)?;
    Ok(psi.vector().dotc(&image))
}

/// Weight of a Poisson distribution with mean `mean` on `n >= dim`.
pub fn poisson_tail(mean: f64, dim: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    // log of the first omitted term, then sum forward until negligible
    let log_fact: f64 = (1..=dim).map(|k| math::ln(k as f64)).sum();
    let mut term = math::exp(-mean + dim as f64 * math::ln(mean) - log_fact);
    let mut total = 0.0;
    let mut n = dim;
    loop {
        total += term;
        n += 1;
        term *= mean / n as f64;
        if (n as f64) > mean && term <= total * 1e-17 {
            break;
        }
        if term == 0.0 {
            break;
        }
    }
    total
}

/// Coherent state `|alpha>` truncated to `basis`.
///
/// Fails with [`Error::Truncation`] (carrying the smallest adequate
/// dimension) when the Poisson weight beyond the top level exceeds
/// [`COHERENT_TAIL_TOL`].
pub fn coherent_state(alpha: Complex64, basis: FockBasis) -> Result<StateVector> {
    if !(alpha.re.is_finite() && alpha.im.is_finite()) {
        return Err(Error::param("alpha", "must be finite"));
    }
    let mean = alpha.norm_sqr();
    if poisson_tail(mean, basis.dim()) >= COHERENT_TAIL_TOL {
        let mut required = basis.dim() + 1;
        while poisson_tail(mean, required) >= COHERENT_TAIL_TOL {
            required += 1;
        }
        return Err(Error::Truncation {
            required_dim: required,
        });
    }
    let mut amps = Vec::with_capacity(basis.dim());
    let mut c = Complex64::new(math::exp(-mean / 2.0), 0.0);
    amps.push(c);
    for n in 1..basis.dim() {
        c = c * alpha / math::sqrt(n as f64);
        amps.push(c);
    }
    StateVector::new(basis, amps)
}

/// `exp(-i H t) psi` by exact diagonalization of `H`.
pub fn evolve(h: &OperatorMatrix, psi: &StateVector, t: f64) -> Result<StateVector> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    if h.basis() != psi.basis() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: psi.basis().dim(),
        });
    }
    psi.check_normalized()?;
    let rotate = |energy: f64| math::polar(1.0, -energy * t);
    let out = if h.is_diagonal() {
        DVector::from_iterator(
            h.dim(),
            psi.amplitudes()
                .iter()
                .enumerate()
                .map(|(n, z)| z * rotate(h.get(n, n).re)),
        )
    } else {
        let (energies, vectors) = h.hermitian_eigen()?;
        let mut coeffs = vectors.adjoint() * psi.vector();
        for (c, e) in coeffs.iter_mut().zip(energies.iter()) {
            *c *= rotate(*e);
        }
        vectors * coeffs
    };
    Ok(StateVector::from_raw(psi.basis(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::FRAC_PI_2;

    fn basis(dim: usize) -> FockBasis {
        FockBasis::new(dim).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn basis_needs_two_levels() {
        assert!(matches!(FockBasis::new(1), Err(Error::InvalidBasis(_))));
        assert!(FockBasis::new(0).is_err());
    }

    #[test]
    fn dim_two_annihilator_has_single_entry() {
        let l = ladder_operators(basis(2));
        assert_eq!(l.annihilation.get(0, 1), c(1.0));
        assert_eq!(l.annihilation.get(0, 0), c(0.0));
        assert_eq!(l.annihilation.get(1, 0), c(0.0));
        assert_eq!(l.annihilation.get(1, 1), c(0.0));
    }

    #[test]
    fn number_operator_is_a_dagger_a() {
        let l = ladder_operators(basis(4));
        let n = l.creation.product(&l.annihilation).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { i as f64 } else { 0.0 };
                assert!((n.get(i, j) - c(want)).norm() < 1e-14);
                assert!((l.number.get(i, j) - c(want)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn truncated_commutator_defect() {
        for dim in [2, 5, 17] {
            let l = ladder_operators(basis(dim));
            let comm = commutator(&l.annihilation, &l.creation).unwrap();
            for i in 0..dim {
                for j in 0..dim {
                    let want = match (i == j, i == dim - 1) {
                        (true, true) => -((dim - 1) as f64),
                        (true, false) => 1.0,
                        _ => 0.0,
                    };
                    assert!((comm.get(i, j) - c(want)).norm() < 1e-12, "dim {dim} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn commutator_minus_identity_has_single_edge_entry() {
        let dim = 9;
        let l = ladder_operators(basis(dim));
        let d = commutator(&l.annihilation, &l.creation)
            .unwrap()
            .difference(&OperatorMatrix::identity(basis(dim)))
            .unwrap();
        let nonzero: Vec<(usize, usize)> = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .filter(|&(i, j)| d.get(i, j).norm() > 1e-12)
            .collect();
        assert_eq!(nonzero, vec![(dim - 1, dim - 1)]);
        assert!((d.get(dim - 1, dim - 1) - c(-(dim as f64))).norm() < 1e-12);
    }

    #[test]
    fn hamiltonian_diagonal_and_parameter_check() {
        let h = oscillator_hamiltonian(basis(3), 1.0).unwrap();
        for (n, e) in [0.5, 1.5, 2.5].iter().enumerate() {
            assert_eq!(h.get(n, n), c(*e));
        }
        assert!(h.is_hermitian());
        assert!(matches!(
            oscillator_hamiltonian(basis(3), 0.0),
            Err(Error::InvalidParameter { name: "omega", .. })
        ));
        assert!(oscillator_hamiltonian(basis(3), -1.0).is_err());
    }

    #[test]
    fn h_a_commutator_below_edge() {
        let dim = 16;
        let omega = 2.0;
        let l = ladder_operators(basis(dim));
        let h = oscillator_hamiltonian(basis(dim), omega).unwrap();
        let lhs = commutator(&h, &l.annihilation)
            .unwrap()
            .sum(&l.annihilation.scaled(c(omega)))
            .unwrap();
        assert!(lhs.max_abs() < 1e-12);
        // [H, a†] = +omega a†
        let up = commutator(&h, &l.creation)
            .unwrap()
            .difference(&l.creation.scaled(c(omega)))
            .unwrap();
        assert!(up.max_abs() < 1e-12);
    }

    #[test]
    fn h_a_dagger_dim8() {
        let b = basis(8);
        let l = ladder_operators(b);
        let h = oscillator_hamiltonian(b, 1.0).unwrap();
        let comm = commutator(&h, &l.creation).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                assert!((comm.get(i, j) - l.creation.get(i, j)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn commutator_trivial_cases() {
        let b = basis(5);
        let l = ladder_operators(b);
        let h = oscillator_hamiltonian(b, 1.3).unwrap();
        assert_eq!(commutator(&l.annihilation, &l.annihilation).unwrap().max_abs(), 0.0);
        assert_eq!(commutator(&h, &l.number).unwrap().max_abs(), 0.0);
        let other = OperatorMatrix::identity(basis(6));
        assert!(commutator(&h, &other).is_err());
    }

    #[test]
    fn expectation_values() {
        let b = basis(8);
        let l = ladder_operators(b);
        let vac = StateVector::basis_state(b, 0).unwrap();
        assert_eq!(expectation(&l.number, &vac).unwrap(), c(0.0));
        let h = oscillator_hamiltonian(b, 1.0).unwrap();
        let three = StateVector::basis_state(b, 3).unwrap();
        assert!((expectation(&h, &three).unwrap() - c(3.5)).norm() < 1e-15);
    }

    #[test]
    fn expectation_rejects_unnormalized() {
        let b = basis(3);
        let raw = StateVector::from_raw(b.into(), DVector::from_vec(vec![c(1.0), c(1.0), c(0.0)]));
        let n = ladder_operators(b).number;
        assert!(matches!(expectation(&n, &raw), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn coherent_vacuum_is_exact() {
        let psi = coherent_state(c(0.0), basis(4)).unwrap();
        assert_eq!(psi.amplitudes()[0], c(1.0));
        assert!(psi.amplitudes()[1..].iter().all(|z| *z == c(0.0)));
    }

    #[test]
    fn coherent_eigenvalue_and_number() {
        let b = basis(32);
        let l = ladder_operators(b);
        let psi = coherent_state(c(2.0), b).unwrap();
        let a = expectation(&l.annihilation, &psi).unwrap();
        assert!((a - c(2.0)).norm() < 1e-8, "<a> = {a}");
        // |alpha|^2 = 4 up to the truncation tail (~1e-18 here)
        let n = expectation(&l.number, &psi).unwrap();
        assert!((n.re - 4.0).abs() < 1e-8);
        assert!(n.im.abs() < 1e-12);
    }

    #[test]
    fn coherent_truncation_error_reports_minimum_dim() {
        // tail beyond n = 11 at mean 9 is ~0.197; 35 levels are needed (oracle)
        let err = coherent_state(c(3.0), basis(12)).unwrap_err();
        assert_eq!(err, Error::Truncation { required_dim: 35 });
        assert!(coherent_state(c(3.0), basis(35)).is_ok());
    }

    #[test]
    fn poisson_tail_matches_reference() {
        // frozen from an arbitrary-precision reference
        assert!((poisson_tail(9.0, 12) - 0.196_991_617_470_657_85).abs() < 1e-14);
        let t = poisson_tail(4.0, 32);
        assert!((t - 1.460_316_600_721_601_7e-18).abs() < 1e-30);
    }

    #[test]
    fn evolve_identity_and_eigenphase() {
        let b = basis(10);
        let h = oscillator_hamiltonian(b, 1.0).unwrap();
        let psi = coherent_state(Complex64::new(0.3, -0.2), b).unwrap();
        let same = evolve(&h, &psi, 0.0).unwrap();
        assert_eq!(same, psi);
        let n3 = StateVector::basis_state(b, 3).unwrap();
        let t = 0.77;
        let out = evolve(&h, &n3, t).unwrap();
        let want = Complex64::from_polar(1.0, -3.5 * t);
        assert!((out.amplitudes()[3] - want).norm() < 1e-15);
    }

    #[test]
    fn coherent_rotates_quarter_period() {
        let b = basis(40);
        let l = ladder_operators(b);
        let h = oscillator_hamiltonian(b, 1.0).unwrap();
        let alpha = Complex64::new(1.5, 0.5);
        let psi = coherent_state(alpha, b).unwrap();
        let out = evolve(&h, &psi, FRAC_PI_2).unwrap();
        let a = expectation(&l.annihilation, &out).unwrap();
        let want = alpha * Complex64::new(0.0, -1.0);
        assert!((a - want).norm() < 1e-8);
    }

    #[test]
    fn evolve_rejects_non_hermitian() {
        let b = basis(4);
        let l = ladder_operators(b);
        let psi = StateVector::basis_state(b, 0).unwrap();
        assert_eq!(evolve(&l.annihilation, &psi, 1.0).unwrap_err(), Error::NotHermitian);
    }

    #[test]
    fn evolve_dense_hermitian_matches_diagonal_route() {
        // x-quadrature style Hermitian operator a + a†: evolve through the
        // eigendecomposition and compare with a Taylor series of exp(-iHt)
        let b = basis(6);
        let l = ladder_operators(b);
        let h = l.annihilation.sum(&l.creation).unwrap();
        assert!(h.is_hermitian() && !h.is_diagonal());
        let psi = StateVector::basis_state(b, 2).unwrap();
        let t = 0.4;
        let out = evolve(&h, &psi, t).unwrap();
        let mut term = psi.vector().clone();
        let mut sum = term.clone();
        for k in 1..60 {
            term = (h.entries() * term) * Complex64::new(0.0, -t / k as f64);
            sum += &term;
        }
        for (x, y) in out.amplitudes().iter().zip(sum.iter()) {
            assert!((x - y).norm() < 1e-12);
        }
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }
}
