//! Large-genus asymptotics of free-energy sequences: factorial growth fits
//! and Borel coefficients.

use alloc::vec::Vec;

use num_complex::Complex64;
use thiserror::Error;

/// Growth exponents scanned when the caller gives none.
pub const DEFAULT_BETA_GRID: [f64; 7] = [1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0];

/// Fewest nonzero entries a fit accepts.
pub const MIN_NONZERO: usize = 4;

/// Entries used by the radius extrapolation.
const TAIL: usize = 4;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum AnalysisError {
    #[error("degenerate sequence: {nonzero} nonzero entries, at least {MIN_NONZERO} are needed")]
    Degenerate { nonzero: usize },
    #[error("the growth exponent must be positive and finite, got {0}")]
    InvalidBeta(f64),
    #[error("empty β grid")]
    EmptyGrid,
    #[error("non-finite entry at g = {0}")]
    NonFinite(usize),
}

/// Best fit of `ln|F_g| ≈ ln Γ(βg+1) − g ln r + offset` over a β grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthFit {
    pub beta: f64,
    pub r_est: f64,
    pub offset: f64,
    /// Root mean square of the log residuals.
    pub residual: f64,
    /// Smallest and largest `g` among the fitted entries.
    pub g_range: (usize, usize),
    pub used: usize,
    /// `(β, residual)` for every grid value, in grid order.
    pub scan: Vec<(f64, f64)>,
}

fn ln_gamma1(beta: f64, g: usize) -> f64 {
    libm::lgamma(beta * g as f64 + 1.0)
}

fn nonzero(seq: &[(usize, f64)]) -> Result<Vec<(usize, f64)>, AnalysisError> {
    let mut out = Vec::new();
    for &(g, v) in seq {
        if !v.is_finite() {
            return Err(AnalysisError::NonFinite(g));
        }
        if v != 0.0 {
            out.push((g, libm::log(v.abs())));
        }
    }
    Ok(out)
}

/// Least squares of `y = a + b x`; returns `(a, b, rms)`.
fn line_fit(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let ss: f64 = pts.iter().map(|p| (p.1 - a - b * p.0) * (p.1 - a - b * p.0)).sum();
    (a, b, libm::sqrt(ss / n))
}

/// Fits the growth model for each `β` in `beta_grid` over the nonzero
/// entries of `seq = [(g, F_g)]` and keeps the smallest residual.
pub fn fit_growth(seq: &[(usize, f64)], beta_grid: &[f64]) -> Result<GrowthFit, AnalysisError> {
    if beta_grid.is_empty() {
        return Err(AnalysisError::EmptyGrid);
    }
    if let Some(b) = beta_grid.iter().find(|b| !(b.is_finite() && **b > 0.0)) {
        return Err(AnalysisError::InvalidBeta(*b));
    }
    let logs = nonzero(seq)?;
    if logs.len() < MIN_NONZERO {
        return Err(AnalysisError::Degenerate { nonzero: logs.len() });
    }
    let mut best: Option<GrowthFit> = None;
    let mut scan = Vec::with_capacity(beta_grid.len());
    for &beta in beta_grid {
        let pts: Vec<(f64, f64)> = logs.iter().map(|&(g, l)| (g as f64, l - ln_gamma1(beta, g))).collect();
        let (offset, slope, residual) = line_fit(&pts);
        scan.push((beta, residual));
        if best.as_ref().is_none_or(|b| residual < b.residual) {
            let g_lo = logs.iter().map(|p| p.0).min().unwrap_or(0);
            let g_hi = logs.iter().map(|p| p.0).max().unwrap_or(0);
            best = Some(GrowthFit { beta, r_est: libm::exp(-slope), offset, residual, g_range: (g_lo, g_hi), used: logs.len(), scan: Vec::new() });
        }
    }
    let mut fit = best.expect("grid is nonempty");
    fit.scan = scan;
    Ok(fit)
}

/// Coefficients `c_g = F_g/Γ(βg+1)` of `Σ_g c_g s^{βg}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BorelSeries {
    pub beta: f64,
    pub coefficients: Vec<(usize, f64)>,
    /// Estimated radius of convergence in `s`; infinite when the input
    /// sequence terminates.
    pub radius_est: f64,
}

impl BorelSeries {
    /// `Σ_g c_g s^{βg}` over the stored coefficients, principal branch.
    pub fn partial_sum(&self, s: Complex64) -> Complex64 {
        self.coefficients.iter().map(|&(g, c)| c * s.powf(self.beta * g as f64)).sum()
    }

    /// Undoes the weighting, giving back `F_g`.
    pub fn original(&self) -> Vec<(usize, f64)> {
        self.coefficients.iter().map(|&(g, c)| (g, c * libm::exp(ln_gamma1(self.beta, g)))).collect()
    }
}

/// Borel coefficients of `seq` with exponent `beta`.
///
/// The radius comes from `|c_g|^{−1/(βg)}` on the last four nonzero
/// entries, extrapolated linearly in `1/g` to `g → ∞`. A sequence whose
/// last entry is zero is treated as finite, giving an entire transform.
pub fn borel_coeffs(seq: &[(usize, f64)], beta: f64) -> Result<BorelSeries, AnalysisError> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(AnalysisError::InvalidBeta(beta));
    }
    let mut coefficients = Vec::with_capacity(seq.len());
    let mut roots = Vec::new();
    for &(g, v) in seq {
        if !v.is_finite() {
            return Err(AnalysisError::NonFinite(g));
        }
        let lg = ln_gamma1(beta, g);
        coefficients.push((g, v / libm::exp(lg)));
        if v != 0.0 && g > 0 {
            let ln_c = libm::log(v.abs()) - lg;
            roots.push((1.0 / g as f64, libm::exp(-ln_c / (beta * g as f64))));
        }
    }
    let terminates = seq.last().is_none_or(|&(_, v)| v == 0.0);
    let radius_est = if terminates || roots.is_empty() {
        f64::INFINITY
    } else {
        let tail = &roots[roots.len().saturating_sub(TAIL)..];
        let (intercept, _, _) = line_fit(tail);
        if intercept > 0.0 {
            intercept
        } else {
            tail[tail.len() - 1].1
        }
    };
    Ok(BorelSeries { beta, coefficients, radius_est })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synth(beta: f64, r: f64, gs: core::ops::RangeInclusive<usize>) -> Vec<(usize, f64)> {
        gs.map(|g| (g, libm::exp(ln_gamma1(beta, g) - g as f64 * libm::log(r)))).collect()
    }

    #[test]
    fn recovers_generating_model() {
        let fit = fit_growth(&synth(2.0, 3.0, 2..=14), &DEFAULT_BETA_GRID).unwrap();
        assert_eq!(fit.beta, 2.0);
        assert!((fit.r_est - 3.0).abs() < 1e-9);
        assert!(fit.residual < 1e-9);
        assert_eq!(fit.g_range, (2, 14));
    }

    #[test]
    fn degenerate_inputs() {
        let zeros: Vec<(usize, f64)> = (2..10).map(|g| (g, 0.0)).collect();
        assert_eq!(fit_growth(&zeros, &DEFAULT_BETA_GRID), Err(AnalysisError::Degenerate { nonzero: 0 }));
        assert_eq!(fit_growth(&[(2, 1.0)], &[]), Err(AnalysisError::EmptyGrid));
        assert!(matches!(borel_coeffs(&zeros, -1.0), Err(AnalysisError::InvalidBeta(_))));
    }

    #[test]
    fn geometric_borel_radius() {
        let rho: f64 = 0.7;
        let seq = synth(2.0, rho.powf(2.0), 2..=12);
        let b = borel_coeffs(&seq, 2.0).unwrap();
        assert!((b.radius_est - rho).abs() < 0.01 * rho);
        let mut finite = seq.clone();
        finite.push((13, 0.0));
        assert!(borel_coeffs(&finite, 2.0).unwrap().radius_est.is_infinite());
    }
}
