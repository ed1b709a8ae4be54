//! Hidden-variable model of a polarizer pair.
//!
//! A photon with polarization angle `lambda` relative to a polarizer axis is
//! transmitted with probability `p1(lambda)`, period `pi`. Two equally
//! polarized photons through polarizers at relative angle `alpha` give the
//! pair transmission
//!
//! ```text
//! m(alpha) = integral_{-pi/2}^{pi/2} p1(lambda) p1(lambda - alpha) d lambda
//! ```
//!
//! which is a circular correlation. Profiles are sampled on
//! `lambda_j = -pi/2 + j pi / M`. The integral is the periodic trapezoid sum
//! over those samples, with off-grid shifts taken from the trigonometric
//! interpolant of the samples; for band-limited profiles both are exact.
//!
//! For an even cosine series `p1 = b0 + sum b_k cos 2k lambda` the
//! correlation has the closed form
//! `pi b0^2 + (pi/2) sum b_k^2 cos 2k alpha`
//! ([`fourier_pair_transmission`]), which is used as an independent check.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;

use crate::{fft, math, Error, Result};

/// Smallest accepted profile grid.
pub const MIN_SAMPLES: usize = 8;

/// Default number of `lambda` samples.
pub const DEFAULT_GRID_SIZE: usize = 512;

/// Default number of `alpha` samples over `[-pi/2, pi/2]`.
pub const DEFAULT_ALPHA_COUNT: usize = 181;

/// Default iteration cap for [`fit_profile`].
pub const DEFAULT_MAX_ITER: usize = 2000;

/// Default stopping tolerance for [`fit_profile`].
pub const DEFAULT_FIT_TOL: f64 = 1e-14;

/// Rounding slack tolerated when a cosine series is sampled into `[0, 1]`.
const BOX_SLACK: f64 = 1e-12;

/// Single-polarizer transmission probability sampled over one period.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionProfile {
    samples: Vec<f64>,
    fourier: Option<Vec<f64>>,
}

impl TransmissionProfile {
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < MIN_SAMPLES {
            return Err(Error::param("samples", "profile needs at least 8 samples"));
        }
        if !samples.iter().all(|p| (0.0..=1.0).contains(p)) {
            return Err(Error::param("samples", "transmission probabilities must lie in [0, 1]"));
        }
        Ok(TransmissionProfile {
            samples,
            fourier: None,
        })
    }

    /// Samples `b0 + sum_k b_k cos(2k lambda)` on `grid_size` points.
    pub fn from_cosine_series(coeffs: &[f64], grid_size: usize) -> Result<Self> {
        if coeffs.is_empty() || !coeffs.iter().all(|b| b.is_finite()) {
            return Err(Error::param("coefficients", "need at least one finite coefficient"));
        }
        if grid_size < MIN_SAMPLES {
            return Err(Error::param("grid_size", "profile needs at least 8 samples"));
        }
        let mut samples = Vec::with_capacity(grid_size);
        for j in 0..grid_size {
            let p = cosine_series(coeffs, lambda(j, grid_size));
            if !(-BOX_SLACK..=1.0 + BOX_SLACK).contains(&p) {
                return Err(Error::param("coefficients", "profile leaves the [0, 1] box"));
            }
            samples.push(p.clamp(0.0, 1.0));
        }
        Ok(TransmissionProfile {
            samples,
            fourier: Some(coeffs.to_vec()),
        })
    }

    /// `p1 = cos^2 lambda`, i.e. coefficients `(1/2, 1/2)`.
    pub fn belinfante(grid_size: usize) -> Result<Self> {
        if grid_size < 64 {
            return Err(Error::param("grid_size", "must be at least 64"));
        }
        Self::from_cosine_series(&[0.5, 0.5], grid_size)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn fourier(&self) -> Option<&[f64]> {
        self.fourier.as_deref()
    }

    pub fn grid_size(&self) -> usize {
        self.samples.len()
    }

    pub fn lambda(&self, j: usize) -> f64 {
        lambda(j, self.samples.len())
    }

    /// Transmission at an arbitrary angle: the cosine series when known,
    /// otherwise periodic linear interpolation of the samples.
    pub fn eval(&self, lam: f64) -> f64 {
        if let Some(b) = &self.fourier {
            return cosine_series(b, lam).clamp(0.0, 1.0);
        }
        let m = self.samples.len();
        let x = (lam + FRAC_PI_2) / PI * m as f64;
        let x = math::rem_euclid(x, m as f64);
        let i = (x as usize).min(m - 1);
        let frac = x - i as f64;
        let a = self.samples[i];
        let b = self.samples[(i + 1) % m];
        a + (b - a) * frac
    }

    /// Samples of the interpolant shifted by `delta`: `p1(lambda_j - delta)`.
    pub fn shifted(&self, delta: f64) -> Vec<f64> {
        shift_samples(&self.samples, delta)
    }
}

/// Random admissible cosine profile: coefficients drawn uniformly from
/// `[-1, 1]`, then mapped affinely onto a random sub-interval of `[0, 1]`
/// using the sampled extremes. The result keeps its cosine series.
pub fn random_cosine_profile<R: Rng + ?Sized>(
    rng: &mut R,
    n_modes: usize,
    grid_size: usize,
) -> Result<TransmissionProfile> {
    if n_modes == 0 {
        return Err(Error::param("n_modes", "must be at least 1"));
    }
    let raw: Vec<f64> = (0..n_modes).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let values: Vec<f64> = (0..grid_size).map(|j| cosine_series(&raw, lambda(j, grid_size))).collect();
    let lo_raw = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi_raw = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut ends = [rng.random::<f64>(), rng.random::<f64>()];
    ends.sort_by(f64::total_cmp);
    let [lo, hi] = ends;
    let range = hi_raw - lo_raw;
    let coeffs: Vec<f64> = if range > 0.0 {
        let scale = (hi - lo) / range;
        raw.iter()
            .enumerate()
            .map(|(k, b)| if k == 0 { lo + (b - lo_raw) * scale } else { b * scale })
            .collect()
    } else {
        let mut c = vec![0.0; n_modes];
        c[0] = lo;
        c
    };
    TransmissionProfile::from_cosine_series(&coeffs, grid_size)
}

fn lambda(j: usize, m: usize) -> f64 {
    -FRAC_PI_2 + j as f64 * PI / m as f64
}

fn cosine_series(coeffs: &[f64], lam: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, b)| b * math::cos(2.0 * k as f64 * lam))
        .sum()
}

/// Periodic shift by `delta` (period `pi`): exact rotation when `delta` is a
/// whole number of grid steps, trigonometric interpolation otherwise.
pub(crate) fn shift_samples(samples: &[f64], delta: f64) -> Vec<f64> {
    let m = samples.len();
    let steps = delta * m as f64 / PI;
    let whole = math::round(steps);
    if (steps - whole).abs() < 1e-9 {
        let s = (whole as i64).rem_euclid(m as i64) as usize;
        return (0..m).map(|j| samples[(j + m - s) % m]).collect();
    }
    let mut spectrum: Vec<Complex64> = samples.iter().map(|&p| Complex64::new(p, 0.0)).collect();
    fft::forward(&mut spectrum);
    for (k, z) in spectrum.iter_mut().enumerate() {
        if m.is_multiple_of(2) && k == m / 2 {
            // Nyquist bin of a real signal: keep the symmetric cosine form
            *z *= math::cos(m as f64 * delta);
        } else {
            let kk = fft::signed_index(k, m);
            *z *= math::polar(1.0, -2.0 * kk * delta);
        }
    }
    fft::inverse(&mut spectrum);
    spectrum.iter().map(|z| z.re).collect()
}

/// `m(alpha)` by the periodic trapezoid rule.
pub fn pair_transmission(p1: &TransmissionProfile, alpha: f64) -> f64 {
    let m = p1.grid_size();
    let shifted = p1.shifted(alpha);
    let s: f64 = p1.samples.iter().zip(&shifted).map(|(a, b)| a * b).sum();
    s * PI / m as f64
}

/// Closed-form correlation of an even cosine series.
pub fn fourier_pair_transmission(coeffs: &[f64], alpha: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, b)| {
            if k == 0 {
                PI * b * b
            } else {
                FRAC_PI_2 * b * b * math::cos(2.0 * k as f64 * alpha)
            }
        })
        .sum()
}

/// `(1 - eps) cos^2 alpha + eps`.
pub fn malus_target(epsilon: f64, alpha: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::param("epsilon", "must lie in [0, 1)"));
    }
    let c = math::cos(alpha);
    Ok((1.0 - epsilon) * c * c + epsilon)
}

/// `n` equally spaced angles covering `[-pi/2, pi/2]` (both ends included);
/// a single angle is placed at zero.
pub fn alpha_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|i| -FRAC_PI_2 + i as f64 * PI / (n - 1) as f64)
            .collect(),
    }
}

/// `m(alpha)` sampled on an angle grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCurve {
    pub alphas: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn pair_curve(p1: &TransmissionProfile, alphas: &[f64]) -> PairCurve {
    PairCurve {
        alphas: alphas.to_vec(),
        values: alphas.iter().map(|&a| pair_transmission(p1, a)).collect(),
    }
}

/// Two-mode profile whose correlation equals the generalized Malus law:
/// `pi b0^2 = (1 + eps)/2` and `(pi/2) b1^2 = (1 - eps)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeSolution {
    pub b0: f64,
    pub b1: f64,
}

impl TwoModeSolution {
    pub fn for_epsilon(epsilon: f64) -> Result<Self> {
        malus_target(epsilon, 0.0)?;
        Ok(TwoModeSolution {
            b0: math::sqrt((1.0 + epsilon) / (2.0 * PI)),
            b1: math::sqrt((1.0 - epsilon) / PI),
        })
    }

    /// Smallest value of the profile, `b0 - |b1|`.
    pub fn minimum(&self) -> f64 {
        self.b0 - self.b1.abs()
    }

    pub fn maximum(&self) -> f64 {
        self.b0 + self.b1.abs()
    }

    pub fn is_admissible(&self) -> bool {
        self.minimum() >= 0.0 && self.maximum() <= 1.0
    }

    /// The profile clipped into `[0, 1]`; no longer a finite cosine series.
    pub fn clipped_profile(&self, grid_size: usize) -> Result<TransmissionProfile> {
        let samples = (0..grid_size)
            .map(|j| (self.b0 + self.b1 * math::cos(2.0 * lambda(j, grid_size))).clamp(0.0, 1.0))
            .collect();
        TransmissionProfile::from_samples(samples)
    }
}

/// One row of the pair-transmission table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub alpha: f64,
    pub m: f64,
    pub malus: f64,
    /// `malus - m`
    pub residual: f64,
}

/// Pair transmission against the Malus target. With `normalize` the `m`
/// column holds `m(alpha) / m(0)`.
pub fn curve_report(
    p1: &TransmissionProfile,
    epsilon: f64,
    alphas: &[f64],
    normalize: bool,
) -> Result<Vec<CurveRow>> {
    malus_target(epsilon, 0.0)?;
    let scale = if normalize {
        let m0 = pair_transmission(p1, 0.0);
        if m0 <= 0.0 {
            return Err(Error::param("profile", "m(0) vanishes; cannot normalize"));
        }
        m0
    } else {
        1.0
    };
    alphas
        .iter()
        .map(|&alpha| {
            let m = pair_transmission(p1, alpha) / scale;
            let malus = malus_target(epsilon, alpha)?;
            Ok(CurveRow {
                alpha,
                m,
                malus,
                residual: malus - m,
            })
        })
        .collect()
}

/// Outcome of [`fit_profile`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Box-feasible profile `clip(C b)`.
    pub profile: TransmissionProfile,
    /// Cosine coefficients `b` before projection onto the box.
    pub coefficients: Vec<f64>,
    pub rms_residual: f64,
    pub max_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Mean-squared deviation after each accepted step, starting point first.
    pub objective_history: Vec<f64>,
}

/// Sampled least-squares objective `mean_alpha (m(alpha) - malus(alpha))^2`
/// over profiles `clip(b0 + sum b_k cos 2k lambda, 0, 1)`.
struct MalusObjective {
    grid_size: usize,
    /// `cos(2 k lambda_j)`, row-major `grid_size x n_modes`
    basis: Vec<f64>,
    n_modes: usize,
    /// weight of `|c_k|^2` in `m(alpha_a)`, row-major `n_alpha x (M/2 + 1)`
    spectral: Vec<f64>,
    n_bins: usize,
    targets: Vec<f64>,
}

impl MalusObjective {
    fn new(epsilon: f64, n_modes: usize, grid_size: usize, alphas: &[f64]) -> Result<Self> {
        let basis = (0..grid_size)
            .flat_map(|j| {
                let lam = lambda(j, grid_size);
                (0..n_modes).map(move |k| math::cos(2.0 * k as f64 * lam))
            })
            .collect();
        let n_bins = grid_size / 2 + 1;
        let spectral = alphas
            .iter()
            .flat_map(|&a| {
                (0..n_bins).map(move |k| {
                    let edge = k == 0 || (grid_size.is_multiple_of(2) && k == grid_size / 2);
                    let w = if edge { PI } else { 2.0 * PI };
                    w * math::cos(2.0 * k as f64 * a)
                })
            })
            .collect();
        let targets = alphas
            .iter()
            .map(|&a| malus_target(epsilon, a))
            .collect::<Result<Vec<_>>>()?;
        Ok(MalusObjective {
            grid_size,
            basis,
            n_modes,
            spectral,
            n_bins,
            targets,
        })
    }

    fn raw_profile(&self, coeffs: &[f64]) -> Vec<f64> {
        self.basis
            .chunks_exact(self.n_modes)
            .map(|row| row.iter().zip(coeffs).map(|(c, b)| c * b).sum())
            .collect()
    }

    /// Objective and its (sub)gradient with respect to the coefficients.
    fn evaluate(&self, coeffs: &[f64]) -> (f64, Vec<f64>) {
        let m = self.grid_size;
        let raw = self.raw_profile(coeffs);
        let mut spectrum: Vec<Complex64> = raw
            .iter()
            .map(|&p| Complex64::new(p.clamp(0.0, 1.0), 0.0))
            .collect();
        fft::forward(&mut spectrum);
        for z in spectrum.iter_mut() {
            *z /= m as f64;
        }
        let power: Vec<f64> = spectrum[..self.n_bins].iter().map(|z| z.norm_sqr()).collect();

        let n_alpha = self.targets.len() as f64;
        let mut objective = 0.0;
        let mut dpower = vec![0.0; self.n_bins];
        for (row, target) in self.spectral.chunks_exact(self.n_bins).zip(&self.targets) {
            let model: f64 = row.iter().zip(&power).map(|(w, p)| w * p).sum();
            let r = model - target;
            objective += r * r;
            for (d, w) in dpower.iter_mut().zip(row) {
                *d += 2.0 * r * w / n_alpha;
            }
        }
        objective /= n_alpha;

        // d|c_k|^2 / dp_j = (2/M) Re(conj(c_k) e^{-2 pi i j k / M})
        let mut h = vec![Complex64::new(0.0, 0.0); m];
        for k in 0..self.n_bins {
            h[k] = spectrum[k].conj() * dpower[k];
        }
        fft::forward(&mut h);
        let mut grad = vec![0.0; self.n_modes];
        for (j, (row, hz)) in self.basis.chunks_exact(self.n_modes).zip(&h).enumerate() {
            if raw[j] <= 0.0 || raw[j] >= 1.0 {
                continue;
            }
            let dp = 2.0 * hz.re / m as f64;
            for (g, c) in grad.iter_mut().zip(row) {
                *g += dp * c;
            }
        }
        (objective, grad)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fits a transmission profile whose pair transmission best matches the
/// generalized Malus law with parameter `epsilon`.
///
/// The profile is `clip(b0 + sum_{k < n_modes} b_k cos 2k lambda, 0, 1)` on
/// `grid_size` samples, starting from the exact two-mode solution. Steps
/// follow the negative gradient with a Barzilai-Borwein trial length and are
/// halved until the objective decreases, so the history is non-increasing.
/// The loop stops when the relative decrease or the gradient norm drops
/// below `tol`, or when no decreasing step exists; running out of
/// iterations returns `converged = false`.
pub fn fit_profile(
    epsilon: f64,
    n_modes: usize,
    grid_size: usize,
    max_iter: usize,
    tol: f64,
) -> Result<FitResult> {
    if n_modes < 2 {
        return Err(Error::param("n_modes", "must be at least 2"));
    }
    if grid_size < 8 * n_modes {
        return Err(Error::param("grid_size", "must be at least 8 * n_modes"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::param("tol", "must be positive"));
    }
    let alphas = alpha_grid(DEFAULT_ALPHA_COUNT);
    let objective = MalusObjective::new(epsilon, n_modes, grid_size, &alphas)?;

    let start = TwoModeSolution::for_epsilon(epsilon)?;
    let mut coeffs = vec![0.0; n_modes];
    coeffs[0] = start.b0;
    coeffs[1] = start.b1;

    let (mut f, mut grad) = objective.evaluate(&coeffs);
    let mut history = vec![f];
    let mut step = 1.0;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iter {
        let gnorm2 = dot(&grad, &grad);
        if math::sqrt(gnorm2) < tol {
            converged = true;
            break;
        }
        iterations += 1;
        let mut accepted = None;
        let mut trial = step;
        for _ in 0..60 {
            let candidate: Vec<f64> = coeffs.iter().zip(&grad).map(|(b, g)| b - trial * g).collect();
            let (f_new, g_new) = objective.evaluate(&candidate);
            if f_new <= f - 1e-4 * trial * gnorm2 {
                accepted = Some((candidate, f_new, g_new));
                break;
            }
            trial *= 0.5;
        }
        let Some((candidate, f_new, g_new)) = accepted else {
            converged = true;
            break;
        };
        let s: Vec<f64> = candidate.iter().zip(&coeffs).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        step = if sy > 0.0 { dot(&s, &s) / sy } else { 2.0 * trial };
        let decrease = (f - f_new) / f.max(f64::MIN_POSITIVE);
        coeffs = candidate;
        f = f_new;
        grad = g_new;
        history.push(f);
        if decrease < tol {
            converged = true;
            break;
        }
    }

    let raw = objective.raw_profile(&coeffs);
    let in_box = raw.iter().all(|p| (-BOX_SLACK..=1.0 + BOX_SLACK).contains(p));
    let profile = if in_box {
        TransmissionProfile::from_cosine_series(&coeffs, grid_size)?
    } else {
        TransmissionProfile::from_samples(raw.iter().map(|p| p.clamp(0.0, 1.0)).collect())?
    };
    let rows = curve_report(&profile, epsilon, &alphas, false)?;
    let rms_residual =
        math::sqrt(rows.iter().map(|r| r.residual * r.residual).sum::<f64>() / rows.len() as f64);
    let max_residual = rows.iter().fold(0.0_f64, |acc, r| acc.max(r.residual.abs()));
    Ok(FitResult {
        profile,
        coefficients: coeffs,
        rms_residual,
        max_residual,
        iterations,
        converged,
        objective_history: history,
    })
}
