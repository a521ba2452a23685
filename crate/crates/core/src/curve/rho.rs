//! The uniformizing coordinate `ρ = √(∏_b (x − x(b)))` in each disc.
//!
//! In the chart of point `a`, `ρ = ζ·u(ζ)` with
//! `u² = ∏_{b≠a} (δ_b + ζ²)`, `δ_b = x(a) − x(b)`, and the branch fixed by
//! taking the principal root for `u(0)` and for each factor `√(1 + ζ²/δ_b)`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{CurveData, CurveError, SpectralCurveLocal, TruncationExceeded};
use crate::scalar::Scalar;
use crate::series::{LaurentSeries, VarTag};

/// `ρ` as a series in `ζ_a`, known up to `ζ^order` (exactly `ζ` for a
/// single-point curve).
pub fn rho_series<F: Scalar>(curve: &SpectralCurveLocal<F>, a: usize, order: usize) -> Result<LaurentSeries<F>, CurveError> {
    let ctx = curve.ctx();
    let tag = VarTag(a as u32);
    let xa = &curve.points()[a].x_value;
    let deltas: Vec<F> = curve.points().iter().enumerate().filter(|(b, _)| *b != a).map(|(_, p)| xa.clone() - &p.x_value).collect();
    if deltas.is_empty() {
        return Ok(LaurentSeries::monomial(ctx, tag, F::one(ctx), 1, None));
    }
    if order == 0 {
        return Err(TruncationExceeded { data: CurveData::Rho { point: a }, index: 1, trunc: 0 }.into());
    }
    let prod = deltas.iter().fold(F::one(ctx), |acc, d| acc * d);
    let u0 = prod.sqrt().ok_or_else(|| CurveError::IrrationalRoot(alloc::format!("{prod}")))?;
    // u(ζ)/u0 as a series in ζ², to ζ^(order−1).
    let half_len = (order - 1) / 2 + 1;
    let mut u = vec![F::zero(ctx); half_len];
    u[0] = F::one(ctx);
    for d in &deltas {
        let inv_d = F::one(ctx) / d;
        let mut factor = Vec::with_capacity(half_len);
        let mut c = F::one(ctx);
        for k in 0..half_len {
            if k > 0 {
                c = c * &F::from_ratio(ctx, 3 - 2 * k as i64, 2 * k as i64) * &inv_d;
            }
            factor.push(c.clone());
        }
        let mut next = vec![F::zero(ctx); half_len];
        for (i, x) in u.iter().enumerate() {
            for (j, y) in factor.iter().enumerate().take(half_len - i) {
                next[i + j].mul_add_assign(x, y);
            }
        }
        u = next;
    }
    let mut coeffs = vec![F::zero(ctx); 2 * half_len - 1];
    for (k, c) in u.into_iter().enumerate() {
        coeffs[2 * k] = c * &u0;
    }
    Ok(LaurentSeries::new(ctx, tag, 1, coeffs, Some(order as i64)))
}

/// Closed-form double-precision evaluation of `ρ` in one chart.
#[derive(Clone, Debug)]
pub struct RhoChart {
    pub u0: Complex64,
    pub deltas: Vec<Complex64>,
}

impl RhoChart {
    pub fn new<F: Scalar>(curve: &SpectralCurveLocal<F>, a: usize) -> Self {
        let xa = curve.points()[a].x_value.to_c64();
        let deltas: Vec<Complex64> = curve.points().iter().enumerate().filter(|(b, _)| *b != a).map(|(_, p)| xa - p.x_value.to_c64()).collect();
        let prod = deltas.iter().fold(Complex64::new(1.0, 0.0), |acc, d| acc * d);
        RhoChart { u0: prod.sqrt(), deltas }
    }

    /// True while every factor `√(1 + ζ²/δ_b)` stays on its principal branch
    /// disc.
    pub fn in_domain(&self, z: Complex64) -> bool {
        self.deltas.iter().all(|d| (z * z / d).norm() < 1.0)
    }

    pub fn rho(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        self.deltas.iter().fold(z * self.u0, |acc, d| acc * (one + z * z / d).sqrt())
    }

    /// `dρ/dζ = (ρ/ζ)·(1 + ζ² Σ_b 1/(δ_b + ζ²))`.
    pub fn drho(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let unit = self.deltas.iter().fold(self.u0, |acc, d| acc * (one + z * z / d).sqrt());
        let corr: Complex64 = self.deltas.iter().map(|d| one / (d + z * z)).sum();
        unit * (one + z * z * corr)
    }

    /// Solves `ρ(ζ) = target` in this chart by Newton continuation from 0.
    pub fn zeta_of_rho(&self, target: Complex64) -> Option<Complex64> {
        if target.norm() == 0.0 {
            return Some(Complex64::new(0.0, 0.0));
        }
        let mut z = target / self.u0;
        const STEPS: usize = 8;
        for step in 1..=STEPS {
            let goal = target * (step as f64 / STEPS as f64);
            if step == 1 {
                z = goal / self.u0;
            }
            let mut converged = false;
            for _ in 0..60 {
                let f = self.rho(z) - goal;
                let dz = f / self.drho(z);
                z -= dz;
                if dz.norm() <= 1e-15 * z.norm().max(1e-300) {
                    converged = true;
                    break;
                }
            }
            if !converged || !self.in_domain(z) {
                return None;
            }
        }
        Some(z)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{builtin_airy, builtin_cubic};
    use super::*;
    use crate::scalar::{Exact, Float, FloatCtx};

    #[test]
    fn airy_rho_is_the_chart_coordinate() {
        let c = builtin_airy::<Exact>(&());
        let r = rho_series(&c, 0, 10).unwrap();
        assert_eq!(r, LaurentSeries::monomial(&(), VarTag(0), Exact::int(1), 1, None));
    }

    #[test]
    fn cubic_rho_squares_to_the_product() {
        let ctx = FloatCtx::default();
        let c = builtin_cubic::<Float>(&ctx, 12);
        for a in 0..2 {
            let r = rho_series(&c, a, 11).unwrap();
            let sq = r.mul(&r).unwrap();
            // ρ² = ζ²(δ + ζ²) with δ = x(a) − x(b).
            let delta = c.points()[a].x_value.clone() - &c.points()[1 - a].x_value;
            let expect = LaurentSeries::new(&ctx, VarTag(a as u32), 2, vec![delta, Float::zero(&ctx), Float::one(&ctx)], None);
            let diff = sq.sub(&expect).unwrap();
            let order = diff.trunc_order().unwrap();
            assert!(order >= 11);
            for e in 0..=order {
                assert!(diff.coeff(e).unwrap().to_c64().norm() < 1e-60, "a = {a}, e = {e}");
            }
            // ρ² is even, so its derivative vanishes at 0.
            assert!(sq.derivative().coeff(0).unwrap().is_zero());
        }
        // Leading coefficient at x = −2/3 is √(−4/3).
        let lead = rho_series(&c, 0, 5).unwrap().coeff(1).unwrap().to_c64();
        assert!((lead - Complex64::new(0.0, (4.0f64 / 3.0).sqrt())).norm() < 1e-14);
    }

    #[test]
    fn exact_mode_reports_irrational_roots() {
        let c = builtin_cubic::<Exact>(&(), 6);
        assert!(matches!(rho_series(&c, 0, 5), Err(CurveError::IrrationalRoot(_))));
    }

    #[test]
    fn chart_inversion_round_trips() {
        let c = builtin_cubic::<Exact>(&(), 6);
        for a in 0..2 {
            let chart = RhoChart::new(&c, a);
            let target = Complex64::from_polar(0.45, 1.1);
            let z = chart.zeta_of_rho(target).unwrap();
            assert!((chart.rho(z) - target).norm() < 1e-14);
            let h = 1e-6;
            let fd = (chart.rho(z + h) - chart.rho(z - h)) / (2.0 * h);
            assert!((fd - chart.drho(z)).norm() < 1e-8);
        }
    }
}
