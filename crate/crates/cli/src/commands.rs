use std::fmt::Write as _;

use timeflow_core::bell::{self, ChshResult, ChshSetting};
use timeflow_core::dilation::{gaussian_packet, trace_trajectory, SpatialGrid};
use timeflow_core::fock::{self, FockBasis};
use timeflow_core::phase::{self, DoubledBasis, Subspace};
use timeflow_core::polarizer::{self, CurveRow, TransmissionProfile};
use timeflow_core::Complex64;

use crate::args::{Command, HalfArg, ModelArg, ProfileArg};
use crate::report::*;
use crate::CliError;

/// Output of one subcommand: the artifact body, an optional second CSV
/// artifact, and the summary line.
#[derive(Debug)]
pub struct Artifact {
    pub body: String,
    pub curve: Option<String>,
    pub summary: String,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn linspace(t_max: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps == 0 || !t_max.is_finite() {
        return Err(CliError::Usage("--steps must be positive and --t-max finite".into()));
    }
    Ok((0..=steps).map(|k| t_max * k as f64 / steps as f64).collect())
}

fn curve_csv(rows: &[CurveRow]) -> String {
    let mut out = String::from("alpha,m,malus,residual\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", num(r.alpha), num(r.m), num(r.malus), num(r.residual));
    }
    out
}

pub fn execute(command: &Command) -> Result<Artifact, CliError> {
    match *command {
        Command::FockCheck { dim, omega } => fock_check(dim, omega),
        Command::PhaseDefect { dim, extended } => phase_defect(dim, extended),
        Command::PhaseEvolve {
            half_dim,
            omega,
            alpha_re,
            alpha_im,
            subspace,
            t_max,
            steps,
        } => phase_evolve(half_dim, omega, Complex64::new(alpha_re, alpha_im), subspace, t_max, steps),
        Command::DilationTrace {
            points,
            half_width,
            mass,
            q0,
            p0,
            sigma,
            window,
            t_max,
            steps,
        } => {
            let grid = SpatialGrid::new(points, half_width, mass)?;
            let packet = gaussian_packet(grid, q0, p0, sigma)?;
            let rec = trace_trajectory(&packet, &linspace(t_max, steps)?, window)?;
            let mut body = String::from("t,r,h,q,p,label\n");
            for i in 0..rec.len() {
                let _ = writeln!(
                    body,
                    "{},{},{},{},{},{}",
                    num(rec.times[i]),
                    num(rec.r_values[i]),
                    num(rec.h_values[i]),
                    num(rec.q_values[i]),
                    num(rec.p_values[i]),
                    rec.labels[i]
                );
            }
            let last = rec.labels.last().map(|l| l.as_str()).unwrap_or("-");
            Ok(Artifact {
                body,
                curve: None,
                summary: format!(
                    "dilation-trace: {} samples, labels monotone: {}, final label {last}",
                    rec.len(),
                    rec.is_monotone()
                ),
            })
        }
        Command::PolarizerCurve {
            epsilon,
            profile,
            ref coeffs,
            grid,
            alphas,
            normalize,
        } => {
            let p1 = match (profile, coeffs) {
                (_, Some(b)) => TransmissionProfile::from_cosine_series(b, grid)?,
                (Some(ProfileArg::Belinfante) | None, None) => TransmissionProfile::belinfante(grid)?,
            };
            let rows = polarizer::curve_report(&p1, epsilon, &polarizer::alpha_grid(alphas), normalize)?;
            let rms = (rows.iter().map(|r| r.residual * r.residual).sum::<f64>() / rows.len().max(1) as f64).sqrt();
            Ok(Artifact {
                body: curve_csv(&rows),
                curve: None,
                summary: format!("polarizer-curve: {} angles, rms residual {rms:.6e}", rows.len()),
            })
        }
        Command::PolarizerFit {
            epsilon,
            modes,
            grid,
            max_iter,
            tol,
            ref curve_output,
        } => {
            let fit = polarizer::fit_profile(epsilon, modes, grid, max_iter, tol)?;
            let curve = match curve_output {
                Some(_) => {
                    let alphas = polarizer::alpha_grid(polarizer::DEFAULT_ALPHA_COUNT);
                    Some(curve_csv(&polarizer::curve_report(&fit.profile, epsilon, &alphas, false)?))
                }
                None => None,
            };
            let report = FitReport {
                epsilon,
                n_modes: modes,
                grid_size: grid,
                coefficients: fit.coefficients.clone(),
                clipped: fit.profile.fourier().is_none(),
                rms_residual: fit.rms_residual,
                max_residual: fit.max_residual,
                iterations: fit.iterations,
                converged: fit.converged,
                objective_history: fit.objective_history.clone(),
                profile: fit.profile.samples().to_vec(),
            };
            Ok(Artifact {
                body: json(&report),
                curve,
                summary: format!(
                    "polarizer-fit: rms residual {:.10}, {} iterations, converged {}",
                    fit.rms_residual, fit.iterations, fit.converged
                ),
            })
        }
        Command::BellChsh {
            model,
            grid,
            events,
            seed,
            a,
            a_prime,
            b,
            b_prime,
        } => bell_chsh(model, grid, events, seed, ChshSetting::new(a, a_prime, b, b_prime)),
        Command::BellSweep { profiles, modes, seed } => {
            let r = bell::local_bound_sweep(profiles, modes, seed)?;
            let report = SweepReport {
                n_profiles: r.n_profiles,
                n_modes: r.n_modes,
                seed: r.seed,
                n_step_profiles: r.n_step_profiles,
                max_abs_s: r.max_abs_s,
                bound: 2.0,
                within_bound: r.max_abs_s <= 2.0 + 1e-8,
            };
            Ok(Artifact {
                body: json(&report),
                curve: None,
                summary: format!("bell-sweep: max |S| = {:.12} over {} profiles", r.max_abs_s, r.n_profiles),
            })
        }
    }
}

fn fock_check(dim: usize, omega: f64) -> Result<Artifact, CliError> {
    let basis = FockBasis::new(dim)?;
    let ladder = fock::ladder_operators(basis);
    let h = fock::oscillator_hamiltonian(basis, omega)?;
    let defect = fock::commutator(&ladder.annihilation, &ladder.creation)?
        .difference(&timeflow_core::OperatorMatrix::identity(basis))?;
    let edge = defect.get(dim - 1, dim - 1).re;
    let mut off_edge: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            if (i, j) != (dim - 1, dim - 1) {
                off_edge = off_edge.max(defect.get(i, j).norm());
            }
        }
    }
    let ha = fock::commutator(&h, &ladder.annihilation)?
        .sum(&ladder.annihilation.scaled(Complex64::new(omega, 0.0)))?;
    let report = FockCheckReport {
        dim,
        omega,
        commutator_edge_entry: edge,
        commutator_off_edge_max: off_edge,
        h_a_residual_max: ha.max_abs(),
        ground_energy: h.get(0, 0).re,
    };
    Ok(Artifact {
        body: json(&report),
        curve: None,
        summary: format!("fock-check: dim {dim}, commutator edge entry {edge}"),
    })
}

fn phase_defect(dim: usize, extended: bool) -> Result<Artifact, CliError> {
    let (name, e) = if extended {
        ("extended", phase::extended_phase_operator(DoubledBasis::new(dim, true)?)?)
    } else {
        ("one-sided", phase::sg_phase_operator(FockBasis::new(dim)?))
    };
    let r = phase::isometry_defect(&e);
    let report = PhaseDefectReport {
        operator: name,
        basis_dim: e.dim(),
        defect_norm: r.norm,
        defect_rank: r.rank,
        defect_support: r.support.clone(),
    };
    Ok(Artifact {
        body: json(&report),
        curve: None,
        summary: format!("phase-defect: {name} operator, rank {} norm {:.3e}", r.rank, r.norm),
    })
}

fn phase_evolve(
    half_dim: usize,
    omega: f64,
    alpha: Complex64,
    half: HalfArg,
    t_max: f64,
    steps: usize,
) -> Result<Artifact, CliError> {
    if half_dim < 4 {
        return Err(CliError::Usage("--half-dim must be at least 4".into()));
    }
    let basis = DoubledBasis::new(half_dim, true)?;
    // leave the two levels next to the wrap-around link empty
    let probe = fock::coherent_state(alpha, FockBasis::new(half_dim - 2)?)?;
    let half = match half {
        HalfArg::Plus => Subspace::Plus,
        HalfArg::Minus => Subspace::Minus,
    };
    let psi = basis.embed(&probe, half)?;
    let traj = phase::phase_trajectory(basis, omega, &psi, &linspace(t_max, steps)?)?;
    let mut body = String::from("t,phase,subspace\n");
    for (t, phi) in traj.times.iter().zip(&traj.phase_values) {
        let _ = writeln!(body, "{},{},{}", num(*t), num(*phi), traj.subspace);
    }
    Ok(Artifact {
        body,
        curve: None,
        summary: format!("phase-evolve: {} half, fitted slope {:.6}", traj.subspace, traj.fitted_slope()),
    })
}

const PAIR_NAMES: [&str; 4] = ["ab", "ab'", "a'b", "a'b'"];

fn bell_chsh(
    model: ModelArg,
    grid: usize,
    events: Option<usize>,
    seed: u64,
    setting: ChshSetting,
) -> Result<Artifact, CliError> {
    let (name, method, result): (&str, &str, ChshResult) = match (model, events) {
        (ModelArg::Qm, Some(_)) => {
            return Err(CliError::Usage("--events applies to the belinfante model only".into()))
        }
        (ModelArg::Qm, None) => ("qm", "closed-form", bell::qm_chsh(&setting)),
        (ModelArg::Belinfante, None) => {
            let p1 = TransmissionProfile::belinfante(grid)?;
            ("belinfante", "quadrature", bell::hv_chsh(&p1, &setting))
        }
        (ModelArg::Belinfante, Some(n)) => {
            let p1 = TransmissionProfile::belinfante(grid)?;
            ("belinfante", "monte-carlo", bell::mc_chsh(&p1, &setting, n, seed)?)
        }
    };
    let report = ChshReport {
        model: name,
        method,
        settings: Settings {
            a: setting.a,
            a_prime: setting.a_prime,
            b: setting.b,
            b_prime: setting.b_prime,
        },
        correlations: result
            .correlations
            .iter()
            .zip(PAIR_NAMES)
            .map(|(c, pair)| PairCorrelation {
                pair,
                value: c.value,
                std_error: c.std_error,
                n_events: c.n_events,
            })
            .collect(),
        s: result.s,
        s_std_error: result.s_std_error(),
        seed: events.map(|_| seed),
        n_events: events,
    };
    Ok(Artifact {
        body: json(&report),
        curve: None,
        summary: format!("bell-chsh: {name} model, S = {:.10}", result.s),
    })
}
