//! Numerical toolkit for irreversible time flow in extended Hilbert spaces.
//!
//! The crate is `no_std` (it needs `alloc`) and purely computational. File
//! formats and the command-line front end live in the `timeflow` crate.
//!
//! * [`fock`]: truncated Fock-space ladder operators, oscillator Hamiltonian,
//!   coherent states and exact evolution.
//! * [`phase`]: the one-sided exponential phase shift and its isometry defect,
//!   plus the doubled two-sided space on which the shift is unitary.
//! * [`dilation`]: free wavepackets on a periodic grid, the dilation generator
//!   `R = (qp + pq)/2` and in/interaction/out classification.
//! * [`polarizer`]: hidden-variable pair transmission as a circular
//!   correlation, the generalized Malus law and a box-constrained profile fit.
//! * [`bell`]: CHSH evaluation for the factorizable polarizer model and the
//!   quantum correlation, by quadrature and by Monte Carlo.

#![no_std]

extern crate alloc;

pub mod bell;
pub mod dilation;
mod error;
mod fft;
pub mod fock;
pub mod linalg;
mod math;
pub mod phase;
pub mod polarizer;

pub use error::{Error, Result};
pub use linalg::{Basis, OperatorMatrix, StateVector};

pub use num_complex::Complex64;
