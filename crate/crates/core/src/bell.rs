//! CHSH evaluation for the factorizable polarizer model and for the quantum
//! correlation `cos 2(a - b)`.
//!
//! In the hidden-variable model each photon of a pair shares the angle
//! `lambda`, drawn uniformly over one period, and is transmitted (+1) or
//! absorbed (-1) at its own polarizer with probability `p1(lambda - setting)`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::polarizer::{pair_transmission, random_cosine_profile, TransmissionProfile};
use crate::{math, Error, Result};

/// Smallest Monte Carlo sample accepted by [`mc_simulate`].
pub const MIN_EVENTS: usize = 1000;

/// Smallest sweep accepted by [`local_bound_sweep`].
pub const MIN_SWEEP_PROFILES: usize = 100;

/// Grid used for sweep profiles; a multiple of 8 so that the canonical
/// angles are whole grid steps.
pub const SWEEP_GRID_SIZE: usize = 512;

/// Polarizer axes for the two sides, reduced to `[0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshSetting {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl ChshSetting {
    pub fn new(a: f64, a_prime: f64, b: f64, b_prime: f64) -> Self {
        let r = |x: f64| math::rem_euclid(x, PI);
        ChshSetting {
            a: r(a),
            a_prime: r(a_prime),
            b: r(b),
            b_prime: r(b_prime),
        }
    }

    /// `(0, pi/4; pi/8, 3pi/8)`
    pub fn canonical() -> Self {
        Self::new(0.0, FRAC_PI_4, FRAC_PI_8, 3.0 * FRAC_PI_8)
    }

    /// The four pairs in CHSH order: `(a,b), (a,b'), (a',b), (a',b')`.
    pub fn pairs(&self) -> [(f64, f64); 4] {
        [
            (self.a, self.b),
            (self.a, self.b_prime),
            (self.a_prime, self.b),
            (self.a_prime, self.b_prime),
        ]
    }
}

/// A correlation value; `std_error` is zero and `n_events` is zero for
/// deterministic evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_events: usize,
}

impl CorrelationEstimate {
    fn exact(value: f64) -> Self {
        CorrelationEstimate {
            value,
            std_error: 0.0,
            n_events: 0,
        }
    }
}

/// `E(a,b)` of the factorizable model.
///
/// Expanding `(2p - 1)(2q - 1)` gives `E = 4 m(b - a) / pi - 4 mean(p1) + 1`,
/// so the value comes from the same trapezoid correlation as the pair
/// transmission and depends on `b - a` only.
pub fn hv_correlation(p1: &TransmissionProfile, a: f64, b: f64) -> CorrelationEstimate {
    let samples = p1.samples();
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let m = pair_transmission(p1, b - a);
    CorrelationEstimate::exact(4.0 * m / PI - 4.0 * mean + 1.0)
}

/// `cos 2(a - b)`
pub fn qm_correlation(a: f64, b: f64) -> CorrelationEstimate {
    CorrelationEstimate::exact(math::cos(2.0 * (a - b)))
}

/// `S = E(a,b) - E(a,b') + E(a',b) + E(a',b')`
pub fn chsh(correlations: &[CorrelationEstimate; 4]) -> f64 {
    correlations[0].value - correlations[1].value + correlations[2].value + correlations[3].value
}

/// The four correlations of a setting together with `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshResult {
    pub setting: ChshSetting,
    pub correlations: [CorrelationEstimate; 4],
    pub s: f64,
}

impl ChshResult {
    fn from_correlations(setting: ChshSetting, correlations: [CorrelationEstimate; 4]) -> Self {
        ChshResult {
            setting,
            correlations,
            s: chsh(&correlations),
        }
    }

    /// Standard error of `S` for independent Monte Carlo estimates.
    pub fn s_std_error(&self) -> f64 {
        math::sqrt(self.correlations.iter().map(|c| c.std_error * c.std_error).sum())
    }
}

pub fn hv_chsh(p1: &TransmissionProfile, setting: &ChshSetting) -> ChshResult {
    let c = setting.pairs().map(|(a, b)| hv_correlation(p1, a, b));
    ChshResult::from_correlations(*setting, c)
}

pub fn qm_chsh(setting: &ChshSetting) -> ChshResult {
    let c = setting.pairs().map(|(a, b)| qm_correlation(a, b));
    ChshResult::from_correlations(*setting, c)
}

/// Event-level estimate of `E(a,b)`.
///
/// Deterministic in `seed`. Off-grid angles are evaluated with
/// [`TransmissionProfile::eval`].
pub fn mc_simulate(
    p1: &TransmissionProfile,
    a: f64,
    b: f64,
    n_events: usize,
    seed: u64,
) -> Result<CorrelationEstimate> {
    simulate_stream(p1, a, b, n_events, seed, 0)
}

fn simulate_stream(
    p1: &TransmissionProfile,
    a: f64,
    b: f64,
    n_events: usize,
    seed: u64,
    stream: u64,
) -> Result<CorrelationEstimate> {
    if n_events < MIN_EVENTS {
        return Err(Error::param("n_events", "need at least 1000 events"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut sum: i64 = 0;
    for _ in 0..n_events {
        let lam = rng.random_range(-PI / 2.0..PI / 2.0);
        let left = rng.random::<f64>() < p1.eval(lam - a);
        let right = rng.random::<f64>() < p1.eval(lam - b);
        sum += if left == right { 1 } else { -1 };
    }
    let n = n_events as f64;
    let mean = sum as f64 / n;
    // products are +-1, so the sample variance is n/(n-1) (1 - mean^2)
    let var = ((1.0 - mean * mean) * n / (n - 1.0)).max(0.0);
    Ok(CorrelationEstimate {
        value: mean,
        std_error: math::sqrt(var / n),
        n_events,
    })
}

/// Monte Carlo CHSH; each pair uses its own stream of the seeded generator.
pub fn mc_chsh(
    p1: &TransmissionProfile,
    setting: &ChshSetting,
    n_events: usize,
    seed: u64,
) -> Result<ChshResult> {
    let pairs = setting.pairs();
    let mut c = [CorrelationEstimate::exact(0.0); 4];
    for (i, (a, b)) in pairs.iter().enumerate() {
        c[i] = simulate_stream(p1, *a, *b, n_events, seed, i as u64)?;
    }
    Ok(ChshResult::from_correlations(*setting, c))
}

/// Summary of [`local_bound_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub n_profiles: usize,
    pub n_modes: usize,
    pub seed: u64,
    /// Profiles with values in `{0, 1}` only.
    pub n_step_profiles: usize,
    pub max_abs_s: f64,
    /// `|S|` per profile, in generation order.
    pub s_values: Vec<f64>,
}

/// `|S|` at the canonical angles over random admissible profiles.
///
/// Every fourth profile is a deterministic step: a random cosine series
/// thresholded to 0/1. The rest are random cosine series squeezed into a
/// random sub-box of `[0, 1]`.
pub fn local_bound_sweep(n_profiles: usize, n_modes: usize, seed: u64) -> Result<SweepReport> {
    if n_profiles < MIN_SWEEP_PROFILES {
        return Err(Error::param("n_profiles", "need at least 100 profiles"));
    }
    if n_modes == 0 {
        return Err(Error::param("n_modes", "must be at least 1"));
    }
    let setting = ChshSetting::canonical();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s_values = Vec::with_capacity(n_profiles);
    let mut n_step_profiles = 0;
    for i in 0..n_profiles {
        let smooth = random_cosine_profile(&mut rng, n_modes, SWEEP_GRID_SIZE)?;
        let profile = if i % 4 == 3 {
            n_step_profiles += 1;
            let cut = rng.random::<f64>();
            let lo = smooth.samples().iter().copied().fold(f64::INFINITY, f64::min);
            let hi = smooth.samples().iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let threshold = lo + cut * (hi - lo);
            let steps = smooth
                .samples()
                .iter()
                .map(|&p| if p > threshold { 1.0 } else { 0.0 })
                .collect();
            TransmissionProfile::from_samples(steps)?
        } else {
            smooth
        };
        s_values.push(hv_chsh(&profile, &setting).s.abs());
    }
    let max_abs_s = s_values.iter().copied().fold(0.0, f64::max);
    Ok(SweepReport {
        n_profiles,
        n_modes,
        seed,
        n_step_profiles,
        max_abs_s,
        s_values,
    })
}
