use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, TAU};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "timeflow", version, about = "Phase-operator, dilation-flow and polarizer-model experiments")]
pub struct Cli {
    /// Artifact path; stdout when omitted
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HalfArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    /// p1 = cos^2 lambda
    Belinfante,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    /// cos 2(a - b)
    Qm,
    /// factorizable model with p1 = cos^2 lambda
    Belinfante,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ladder operators and oscillator Hamiltonian on a truncated Fock space (JSON)
    FockCheck {
        #[arg(long, default_value_t = 16)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
    },

    /// Isometry defect of the one-sided or extended phase operator (JSON)
    PhaseDefect {
        /// Fock dimension; half dimension of the doubled basis with --extended
        #[arg(long, default_value_t = 64)]
        dim: usize,
        #[arg(long)]
        extended: bool,
    },

    /// Phase of a coherent probe under the extended Hamiltonian (CSV t,phase,subspace)
    PhaseEvolve {
        #[arg(long, default_value_t = 40)]
        half_dim: usize,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        alpha_re: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha_im: f64,
        #[arg(long, value_enum, default_value_t = HalfArg::Plus)]
        subspace: HalfArg,
        #[arg(long, default_value_t = TAU)]
        t_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },

    /// Free wavepacket trajectory with in/interaction/out labels (CSV t,r,h,q,p,label)
    DilationTrace {
        #[arg(long, default_value_t = 4096)]
        points: usize,
        #[arg(long, default_value_t = 200.0)]
        half_width: f64,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[arg(long, default_value_t = -20.0, allow_negative_numbers = true)]
        q0: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        p0: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Half-width w of the interaction window |<q>| < w
        #[arg(long)]
        window: f64,
        #[arg(long, default_value_t = 25.0)]
        t_max: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },

    /// Pair transmission against the Malus target (CSV alpha,m,malus,residual)
    PolarizerCurve {
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, value_enum, conflicts_with = "coeffs")]
        profile: Option<ProfileArg>,
        /// Cosine coefficients b0,b1,... of p1
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        coeffs: Option<Vec<f64>>,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long, default_value_t = 181)]
        alphas: usize,
        /// Report m(alpha) / m(0)
        #[arg(long)]
        normalize: bool,
    },

    /// Box-constrained fit of p1 to the Malus law (JSON)
    PolarizerFit {
        #[arg(long, default_value_t = 0.02)]
        epsilon: f64,
        #[arg(long, default_value_t = 6)]
        modes: usize,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long, default_value_t = 2000)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-14)]
        tol: f64,
        /// Also write the fitted curve as CSV alpha,m,malus,residual
        #[arg(long)]
        curve_output: Option<PathBuf>,
    },

    /// CHSH value by quadrature or Monte Carlo (JSON)
    BellChsh {
        #[arg(long, value_enum, default_value_t = ModelArg::Qm)]
        model: ModelArg,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        /// Simulate this many events per setting pair instead of quadrature
        #[arg(long)]
        events: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = FRAC_PI_4, allow_negative_numbers = true)]
        a_prime: f64,
        #[arg(long, default_value_t = FRAC_PI_8, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, default_value_t = 3.0 * FRAC_PI_8, allow_negative_numbers = true)]
        b_prime: f64,
    },

    /// Largest |S| over random admissible profiles (JSON)
    BellSweep {
        #[arg(long, default_value_t = 1000)]
        profiles: usize,
        #[arg(long, default_value_t = 8)]
        modes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}
