//! JSON report shapes. Key names are stable.

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct FockCheckReport {
    pub dim: usize,
    pub omega: f64,
    /// `([a, a_dag] - I)` at `(dim-1, dim-1)`
    pub commutator_edge_entry: f64,
    /// largest `|[a, a_dag] - I|` away from the edge entry
    pub commutator_off_edge_max: f64,
    /// largest `|[H, a] + omega a|`
    pub h_a_residual_max: f64,
    pub ground_energy: f64,
}

#[derive(Debug, Serialize)]
pub struct PhaseDefectReport {
    /// "one-sided" or "extended"
    pub operator: &'static str,
    pub basis_dim: usize,
    pub defect_norm: f64,
    pub defect_rank: usize,
    pub defect_support: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct FitReport {
    pub epsilon: f64,
    pub n_modes: usize,
    pub grid_size: usize,
    pub coefficients: Vec<f64>,
    /// true when the profile had to be clipped into [0, 1]
    pub clipped: bool,
    pub rms_residual: f64,
    pub max_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub objective_history: Vec<f64>,
    pub profile: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct Settings {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

#[derive(Debug, Serialize)]
pub struct PairCorrelation {
    /// "ab", "ab'", "a'b" or "a'b'"
    pub pair: &'static str,
    pub value: f64,
    pub std_error: f64,
    pub n_events: usize,
}

#[derive(Debug, Serialize)]
pub struct ChshReport {
    /// "qm" or "belinfante"
    pub model: &'static str,
    /// "quadrature", "closed-form" or "monte-carlo"
    pub method: &'static str,
    pub settings: Settings,
    pub correlations: Vec<PairCorrelation>,
    pub s: f64,
    pub s_std_error: f64,
    pub seed: Option<u64>,
    pub n_events: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub n_profiles: usize,
    pub n_modes: usize,
    pub seed: u64,
    pub n_step_profiles: usize,
    pub max_abs_s: f64,
    pub bound: f64,
    pub within_bound: bool,
}
