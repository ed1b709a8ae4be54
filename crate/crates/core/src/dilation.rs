//! Free relative motion of two particles on a periodic 1-D grid and the
//! dilation generator `R = (qp + pq)/2`.
//!
//! Under `H = p^2 / 2m` one has `i[H, R] = p^2 / m = 2H`, so `<R>` grows
//! linearly at rate `2<H>`. Its sign separates incoming (`<R> < 0`) from
//! outgoing (`<R> >= 0`) packets; a window `|<q>| < w` stands in for the
//! interaction region.
//!
//! Propagation is spectral: the momentum-space phase `exp(-i p^2 t / 2m)` is
//! applied between forward and inverse FFTs, which is exactly unitary on the
//! grid. There is no absorbing layer, so a packet that reaches the edge of
//! the box is reported as an error instead of being silently damped.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;

use crate::{fft, math, Error, Result};

/// Minimum number of grid points.
pub const MIN_POINTS: usize = 256;

/// Edge amplitude allowed relative to the packet peak.
pub const BOUNDARY_TOL: f64 = 1e-8;

/// Uniform grid on `[-L, L)` for the relative coordinate, with reduced mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    n_points: usize,
    half_width: f64,
    mass: f64,
}

impl SpatialGrid {
    pub fn new(n_points: usize, half_width: f64, mass: f64) -> Result<Self> {
        if !n_points.is_power_of_two() || n_points < MIN_POINTS {
            return Err(Error::param("n_points", "must be a power of two >= 256"));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::param("half_width", "must be positive"));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::param("mass", "must be positive"));
        }
        Ok(SpatialGrid {
            n_points,
            half_width,
            mass,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n_points as f64
    }

    pub fn position(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    /// Momentum of FFT bin `k`.
    pub fn momentum(&self, k: usize) -> f64 {
        2.0 * PI * fft::signed_index(k, self.n_points) / (self.n_points as f64 * self.spacing())
    }

    /// Largest representable momentum, `pi / dx`.
    pub fn max_momentum(&self) -> f64 {
        PI / self.spacing()
    }
}

/// Wavefunction samples on a [`SpatialGrid`], normalized so that
/// `sum |psi|^2 dx = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavepacketGrid {
    grid: SpatialGrid,
    amplitudes: Vec<Complex64>,
}

impl WavepacketGrid {
    /// Wraps samples, normalizes them and checks the boundary invariant.
    pub fn new(grid: SpatialGrid, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.n_points() {
            return Err(Error::DimensionMismatch {
                expected: grid.n_points(),
                found: amplitudes.len(),
            });
        }
        let mut packet = WavepacketGrid { grid, amplitudes };
        let norm = packet.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::param("amplitudes", "packet must have finite nonzero norm"));
        }
        for z in packet.amplitudes.iter_mut() {
            *z /= norm;
        }
        packet.check_boundary(0.0)?;
        Ok(packet)
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `sqrt(sum |psi|^2 dx)`
    pub fn norm(&self) -> f64 {
        let s: f64 = self.amplitudes.iter().map(|z| z.norm_sqr()).sum();
        math::sqrt(s * self.grid.spacing())
    }

    fn weight(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn position_mean(&self) -> f64 {
        let s: f64 = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(j, z)| self.grid.position(j) * z.norm_sqr())
            .sum();
        s / self.weight()
    }

    fn spectrum(&self) -> Vec<Complex64> {
        let mut phi = self.amplitudes.clone();
        fft::forward(&mut phi);
        phi
    }

    fn momentum_moment(&self, f: impl Fn(f64) -> f64) -> f64 {
        let phi = self.spectrum();
        let total: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
        let s: f64 = phi
            .iter()
            .enumerate()
            .map(|(k, z)| f(self.grid.momentum(k)) * z.norm_sqr())
            .sum();
        s / total
    }

    pub fn momentum_mean(&self) -> f64 {
        self.momentum_moment(|p| p)
    }

    /// `<p^2 / 2m>`
    pub fn energy(&self) -> f64 {
        let m = self.grid.mass();
        self.momentum_moment(|p| p * p / (2.0 * m))
    }

    /// `p psi` computed spectrally.
    fn apply_momentum(&self) -> Vec<Complex64> {
        let mut phi = self.spectrum();
        for (k, z) in phi.iter_mut().enumerate() {
            *z *= self.grid.momentum(k);
        }
        fft::inverse(&mut phi);
        phi
    }

    fn check_boundary(&self, time: f64) -> Result<()> {
        let peak = self.amplitudes.iter().fold(0.0_f64, |acc, z| acc.max(math::modulus(*z)));
        let first = math::modulus(self.amplitudes[0]);
        let last = math::modulus(self.amplitudes[self.amplitudes.len() - 1]);
        if first.max(last) >= BOUNDARY_TOL * peak {
            return Err(Error::BoundaryViolation { time });
        }
        Ok(())
    }
}

/// Minimum-uncertainty packet centred at `q0` with mean momentum `p0` and
/// position spread `sigma`.
pub fn gaussian_packet(grid: SpatialGrid, q0: f64, p0: f64, sigma: f64) -> Result<WavepacketGrid> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::param("sigma", "must be positive"));
    }
    if !(q0.is_finite() && p0.is_finite()) {
        return Err(Error::param("q0/p0", "must be finite"));
    }
    if q0.abs() + 6.0 * sigma >= grid.half_width() {
        return Err(Error::BoundaryViolation { time: 0.0 });
    }
    // momentum spread is 1/(2 sigma); keep six of them below Nyquist
    let limit = grid.max_momentum();
    if p0.abs() + 6.0 / (2.0 * sigma) >= limit {
        return Err(Error::MomentumAliasing { limit });
    }
    let amps = (0..grid.n_points())
        .map(|j| {
            let x = grid.position(j);
            let envelope = math::exp(-(x - q0) * (x - q0) / (4.0 * sigma * sigma));
            math::polar(envelope, p0 * x)
        })
        .collect();
    WavepacketGrid::new(grid, amps)
}

/// `exp(-i p^2 t / 2m) psi`.
pub fn free_evolve(packet: &WavepacketGrid, t: f64) -> Result<WavepacketGrid> {
    let grid = packet.grid;
    let mut phi = packet.spectrum();
    for (k, z) in phi.iter_mut().enumerate() {
        let p = grid.momentum(k);
        *z *= math::polar(1.0, -p * p * t / (2.0 * grid.mass()));
    }
    fft::inverse(&mut phi);
    let out = WavepacketGrid {
        grid,
        amplitudes: phi,
    };
    out.check_boundary(t)?;
    Ok(out)
}

/// `<(qp + pq)/2> = Re <psi| q p |psi>`.
pub fn r_expectation(packet: &WavepacketGrid) -> f64 {
    let p_psi = packet.apply_momentum();
    let s: f64 = packet
        .amplitudes
        .iter()
        .zip(&p_psi)
        .enumerate()
        .map(|(j, (psi, ppsi))| packet.grid.position(j) * (psi.conj() * ppsi).re)
        .sum();
    s / packet.weight()
}

/// Region of the extended space a packet belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    Incoming,
    Interaction,
    Outgoing,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Incoming => "in",
            Region::Interaction => "interaction",
            Region::Outgoing => "out",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `Interaction` inside the window, otherwise the sign of `<R>` decides
/// (zero counts as outgoing).
pub fn classify(packet: &WavepacketGrid, interaction_halfwidth: f64) -> Region {
    if packet.position_mean().abs() < interaction_halfwidth {
        Region::Interaction
    } else if r_expectation(packet) < 0.0 {
        Region::Incoming
    } else {
        Region::Outgoing
    }
}

/// Expectation values and labels sampled along a free trajectory.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub r_values: Vec<f64>,
    pub h_values: Vec<f64>,
    pub q_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub labels: Vec<Region>,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Labels never step back from `out` toward `in`.
    pub fn is_monotone(&self) -> bool {
        self.labels.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Evolves `packet` to each of `times` (measured from the packet's own
/// time origin) and records `<R>`, `<H>`, `<q>`, `<p>` and the region.
pub fn trace_trajectory(
    packet: &WavepacketGrid,
    times: &[f64],
    interaction_halfwidth: f64,
) -> Result<TrajectoryRecord> {
    if interaction_halfwidth.is_nan() || interaction_halfwidth <= 0.0 {
        return Err(Error::param("interaction_halfwidth", "must be positive"));
    }
    let mut rec = TrajectoryRecord::default();
    for &t in times {
        let psi = free_evolve(packet, t)?;
        rec.times.push(t);
        rec.r_values.push(r_expectation(&psi));
        rec.h_values.push(psi.energy());
        rec.q_values.push(psi.position_mean());
        rec.p_values.push(psi.momentum_mean());
        rec.labels.push(classify(&psi, interaction_halfwidth));
    }
    Ok(rec)
}
