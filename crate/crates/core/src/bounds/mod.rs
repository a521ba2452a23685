//! Growth-bound machinery: the combinatorial sequence `C_{g,n}` and its
//! factorial bound, sampled curve constants, and numeric checks of the
//! bounds on `W_{g,n}` and `F_g`.

mod cgn;
mod check;
mod sup;

use thiserror::Error;

use crate::engine::EngineError;

pub use cgn::{
    big_a, big_d, cgn, factorial_bound_check, grid_min_eta, inf_eta, log_abs, ratio_f64, verify_proof_identities, CgnTable, EEnclosure, EtaInfimum,
    FactorialBoundParams, FactorialBoundReport, IdentityCheck,
};
pub use check::{check_fg_bound, check_omega_bound, sample_tuples, BoundCheckReport, FgBoundReport, OmegaBoundChecker};
pub use sup::{
    estimate_constants, estimate_phi_ratio, estimate_sup_b, estimate_sup_c, BoundConstants, CurveNumerics, SamplingConfig, SamplingMeta, SupEstimate,
};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum BoundsError {
    #[error("could not invert ρ on disc #{disc} at |ρ| = {r}, arg ρ = {theta}")]
    ChartFailure { disc: usize, r: f64, theta: f64 },
    #[error("non-finite value of the {what} expression on disc #{disc} at |ρ| = {r}, arg ρ = {theta}; the curve data is likely invalid")]
    NonFinite { what: &'static str, disc: usize, r: f64, theta: f64 },
    #[error("({g}, {n}) is not a stable type with n ≥ 1")]
    Unstable { g: usize, n: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
}
