use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cgn::{log_abs, CgnTable, FactorialBoundParams};
use super::sup::BoundConstants;
use super::BoundsError;
use crate::curve::{RhoChart, SpectralCurveLocal};
use crate::engine::{dim, euler, EngineError, FormEvaluator, OmegaForm};
use crate::scalar::{factorial, Scalar};

/// One evaluation of the bound on `|W_{g,n}|`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheckReport {
    pub g: usize,
    pub n: usize,
    /// `(disc, ρ)` for each point.
    pub points: Vec<(usize, Complex64)>,
    pub r_min: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

impl BoundCheckReport {
    pub fn holds(&self) -> bool {
        self.margin >= 0.0
    }
}

/// Evaluates `W_{g,n}` and the right side of its bound at many tuples,
/// doing the per-form setup once.
#[derive(Clone, Debug)]
pub struct OmegaBoundChecker {
    g: usize,
    n: usize,
    eval: FormEvaluator<Complex64>,
    charts: Vec<RhoChart>,
    /// `ln((n−1)!·C_{g,n}·C^{2g−2+n}·B^{g−1+n})`.
    ln_prefactor: f64,
    /// `2d_{g,n} + 2n`.
    power: i32,
}

impl OmegaBoundChecker {
    pub fn new<F: Scalar>(
        curve: &SpectralCurveLocal<F>,
        form: &OmegaForm<F>,
        constants: &BoundConstants,
        table: &mut CgnTable,
    ) -> Result<Self, BoundsError> {
        let (g, n) = (form.g, form.n);
        if n == 0 || 2 * g + n < 3 {
            return Err(BoundsError::Unstable { g, n });
        }
        let c = table.get(g, n);
        let ln_c = log_abs(&c).unwrap_or(f64::NEG_INFINITY);
        let ln_fact = log_abs(&BigRational::from_integer(factorial(n as u64 - 1))).unwrap_or(0.0);
        let ln_prefactor =
            ln_fact + ln_c + euler(g, n) as f64 * libm::log(constants.c_sup) + (g as f64 - 1.0 + n as f64) * libm::log(constants.b_sup);
        let c64 = curve.to_c64();
        let form = form.map_scalars(Scalar::to_c64);
        Ok(OmegaBoundChecker {
            g,
            n,
            eval: FormEvaluator::new(&c64, &form)?,
            charts: (0..c64.num_points()).map(|a| RhoChart::new(&c64, a)).collect(),
            ln_prefactor,
            power: (2 * dim(g, n) + 2 * n as i64) as i32,
        })
    }

    /// Checks the bound at `points = [(disc, ρ)]`.
    pub fn check(&self, points: &[(usize, Complex64)]) -> Result<BoundCheckReport, BoundsError> {
        if points.len() != self.n {
            return Err(EngineError::Arity { g: self.g, n: self.n, got: points.len() }.into());
        }
        let mut zetas = Vec::with_capacity(points.len());
        for &(a, rho) in points {
            let chart = self.charts.get(a).ok_or(EngineError::UnknownPoint(a))?;
            let z = chart.zeta_of_rho(rho).ok_or(BoundsError::ChartFailure { disc: a, r: rho.norm(), theta: rho.arg() })?;
            zetas.push((a, z));
        }
        let lhs = self.eval.eval_w(&zetas)?.norm();
        let r_min = points.iter().map(|(_, r)| r.norm()).fold(f64::INFINITY, f64::min);
        let rhs = libm::exp(self.ln_prefactor - self.power as f64 * libm::log(r_min));
        Ok(BoundCheckReport { g: self.g, n: self.n, points: points.to_vec(), r_min, lhs, rhs, margin: rhs - lhs })
    }
}

/// Single-tuple convenience wrapper around [`OmegaBoundChecker`].
pub fn check_omega_bound<F: Scalar>(
    curve: &SpectralCurveLocal<F>,
    form: &OmegaForm<F>,
    constants: &BoundConstants,
    table: &mut CgnTable,
    points: &[(usize, Complex64)],
) -> Result<BoundCheckReport, BoundsError> {
    OmegaBoundChecker::new(curve, form, constants, table)?.check(points)
}

/// `count` tuples of `n` points `(disc, ρ)` with uniform disc, uniform
/// `|ρ| ∈ [R/10, R]` and uniform argument, reproducible from `seed`.
pub fn sample_tuples(discs: usize, radius: f64, n: usize, count: usize, seed: u64) -> Vec<Vec<(usize, Complex64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let a = rng.gen_range(0..discs);
                    let r = rng.gen_range(radius / 10.0..=radius);
                    let theta = rng.gen_range(0.0..2.0 * PI);
                    (a, Complex64::from_polar(r, theta))
                })
                .collect()
        })
        .collect()
}

/// Both right sides of the `F_g` bound.
#[derive(Clone, Debug, PartialEq)]
pub struct FgBoundReport {
    pub g: usize,
    pub lhs: f64,
    /// `C̃ C^{2g−2} B^{g−1} R^{−(6g−6)} C_{g,1}/(2g−2)`.
    pub rhs: f64,
    /// The same with `C_{g,1}` replaced by `(9/(80e)) r^{−g} (5g−2)!`.
    pub rhs_factorial: f64,
    pub margin: f64,
    pub margin_factorial: f64,
}

impl FgBoundReport {
    pub fn holds(&self) -> bool {
        self.margin >= 0.0 && self.margin_factorial >= 0.0
    }
}

pub fn check_fg_bound<F: Scalar>(
    g: usize,
    fg: &F,
    constants: &BoundConstants,
    table: &mut CgnTable,
    params: &FactorialBoundParams,
) -> Result<FgBoundReport, BoundsError> {
    if g < 2 {
        return Err(EngineError::GenusTooSmall(g).into());
    }
    let gf = g as f64;
    let common = libm::log(constants.ctilde) + (2.0 * gf - 2.0) * libm::log(constants.c_sup) + (gf - 1.0) * libm::log(constants.b_sup)
        - (6.0 * gf - 6.0) * libm::log(constants.radius)
        - libm::log(2.0 * gf - 2.0);
    let ln_c = log_abs(&table.get(g, 1)).unwrap_or(f64::NEG_INFINITY);
    let ln_fact = log_abs(&BigRational::from_integer(factorial(5 * g as u64 - 2))).unwrap_or(0.0);
    let ln_alt = libm::log(9.0 / 80.0) - 1.0 - gf * libm::log(params.r_f64()) + ln_fact;
    let lhs = fg.to_c64().norm();
    let rhs = libm::exp(common + ln_c);
    let rhs_factorial = libm::exp(common + ln_alt);
    Ok(FgBoundReport { g, lhs, rhs, rhs_factorial, margin: rhs - lhs, margin_factorial: rhs_factorial - lhs })
}
