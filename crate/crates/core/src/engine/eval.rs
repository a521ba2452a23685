use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::form::{OmegaForm, Slot};
use super::EngineError;
use crate::curve::{RhoChart, SpectralCurveLocal};
use crate::scalar::Scalar;

/// Relative slack on the disc boundary check `|ρ| ≤ R`.
const BOUNDARY_SLACK: f64 = 1e-12;

/// Direct evaluation of one form, with the basis data laid out once.
#[derive(Clone, Debug)]
pub struct FormEvaluator<F: Scalar> {
    g: usize,
    n: usize,
    ctx: F::Ctx,
    slots: Vec<Slot>,
    /// `regular[a][i]`: regular part of `φ_{slots[i]}` in the chart of `a`.
    regular: Vec<Vec<Vec<F>>>,
    /// Per key: distinct slot indices with multiplicities, and the coefficient.
    terms: Vec<(Vec<(usize, usize)>, F)>,
    charts: Vec<RhoChart>,
    radius: f64,
}

impl<F: Scalar> FormEvaluator<F> {
    pub fn new(curve: &SpectralCurveLocal<F>, form: &OmegaForm<F>) -> Result<Self, EngineError> {
        let np = curve.num_points();
        let mut index: BTreeMap<Slot, usize> = BTreeMap::new();
        let mut terms = Vec::with_capacity(form.len());
        for (key, c) in form.iter() {
            let mut runs: Vec<(usize, usize)> = Vec::new();
            for s in key {
                if s.point as usize >= np {
                    return Err(EngineError::UnknownPoint(s.point as usize));
                }
                let next = index.len();
                let i = *index.entry(*s).or_insert(next);
                match runs.last_mut() {
                    Some((j, m)) if *j == i => *m += 1,
                    _ => runs.push((i, 1)),
                }
            }
            terms.push((runs, c.clone()));
        }
        let mut slots = vec![Slot::new(0, 0); index.len()];
        for (s, i) in &index {
            slots[*i] = *s;
        }
        let ctx = curve.ctx().clone();
        let mut regular = Vec::with_capacity(np);
        for a in 0..np {
            let mut row = Vec::with_capacity(slots.len());
            for s in &slots {
                let (b, k) = (s.point as usize, s.k as usize);
                let part = curve.b_part(a, b);
                let jmax = match part.trunc {
                    Some(t) if k > t => 0,
                    Some(t) => t + 1,
                    None => part.coeffs.len(),
                };
                let inv = F::from_ratio(&ctx, 1, k as i64 + 1);
                let coeffs: Vec<F> =
                    (0..jmax).map(|j| curve.beta(a, b, j, k).map(|v| v * &inv)).collect::<Result<_, _>>().map_err(crate::curve::CurveError::from)?;
                row.push(coeffs);
            }
            regular.push(row);
        }
        Ok(FormEvaluator {
            g: form.g,
            n: form.n,
            ctx,
            slots,
            regular,
            terms,
            charts: (0..np).map(|a| RhoChart::new(curve, a)).collect(),
            radius: curve.radius().to_c64().re,
        })
    }

    fn check(&self, points: &[(usize, F)]) -> Result<(), EngineError> {
        if points.len() != self.n {
            return Err(EngineError::Arity { g: self.g, n: self.n, got: points.len() });
        }
        for (a, z) in points {
            let chart = self.charts.get(*a).ok_or(EngineError::UnknownPoint(*a))?;
            if z.is_zero() {
                return Err(EngineError::ZeroZeta);
            }
            let zc = z.to_c64();
            let rho = chart.rho(zc).norm();
            if !chart.in_domain(zc) || rho > self.radius * (1.0 + BOUNDARY_SLACK) {
                return Err(EngineError::OutsideDisc { point: *a, rho, radius: self.radius });
            }
        }
        Ok(())
    }

    /// `ω_{g,n}/∏dζ` at the given points.
    pub fn eval(&self, points: &[(usize, F)]) -> Result<F, EngineError> {
        self.check(points)?;
        let ctx = &self.ctx;
        // values[i][s] = φ_s at point i.
        let values: Vec<Vec<F>> = points
            .iter()
            .map(|(a, z)| {
                let zinv = F::one(ctx) / z;
                let zinv2 = zinv.clone() * &zinv;
                self.slots
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        let mut v = horner(&self.regular[*a][i], z, ctx);
                        if s.point as usize == *a {
                            v += &(zinv2.pow(ctx, s.k as u32 / 2 + 1));
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let mut total = F::zero(ctx);
        for (runs, c) in &self.terms {
            let s = symmetric_sum(runs, &values, ctx);
            total.mul_add_assign(&s, c);
        }
        Ok(total)
    }

    /// `W_{g,n} = ω_{g,n}/∏dρ` at the given points, in double precision.
    pub fn eval_w(&self, points: &[(usize, F)]) -> Result<Complex64, EngineError> {
        let v = self.eval(points)?.to_c64();
        let d: Complex64 = points.iter().map(|(a, z)| self.charts[*a].drho(z.to_c64())).product();
        Ok(v / d)
    }
}

fn horner<F: Scalar>(c: &[F], z: &F, ctx: &F::Ctx) -> F {
    c.iter().rev().fold(F::zero(ctx), |acc, v| acc * z + v)
}

/// `Σ` over distinct orderings of the multiset `runs` of `∏_i values[i][slot_i]`,
/// by dynamic programming over used multiplicities.
fn symmetric_sum<F: Scalar>(runs: &[(usize, usize)], values: &[Vec<F>], ctx: &F::Ctx) -> F {
    let radix: Vec<usize> = runs.iter().map(|(_, m)| m + 1).collect();
    let states: usize = radix.iter().product();
    let mut stride = vec![1usize; runs.len()];
    for i in 1..runs.len() {
        stride[i] = stride[i - 1] * radix[i - 1];
    }
    let mut dp = vec![F::zero(ctx); states];
    dp[0] = F::one(ctx);
    for state in 0..states {
        if dp[state].is_zero() {
            continue;
        }
        let mut used = 0;
        let digits: Vec<usize> = (0..runs.len()).map(|r| (state / stride[r]) % radix[r]).collect();
        for d in &digits {
            used += d;
        }
        if used == values.len() {
            continue;
        }
        let cur = dp[state].clone();
        for (r, (slot, m)) in runs.iter().enumerate() {
            if digits[r] < *m {
                let v = &values[used][*slot];
                dp[state + stride[r]].mul_add_assign(&cur, v);
            }
        }
    }
    dp.pop().unwrap_or_else(|| F::zero(ctx))
}

/// `ω_{g,n}/∏dζ` at `points = [(point index, ζ)]`.
pub fn omega_eval<F: Scalar>(curve: &SpectralCurveLocal<F>, form: &OmegaForm<F>, points: &[(usize, F)]) -> Result<F, EngineError> {
    FormEvaluator::new(curve, form)?.eval(points)
}

/// `W_{g,n} = ω_{g,n}/∏dρ` at `points`.
pub fn w_eval<F: Scalar>(curve: &SpectralCurveLocal<F>, form: &OmegaForm<F>, points: &[(usize, F)]) -> Result<Complex64, EngineError> {
    FormEvaluator::new(curve, form)?.eval_w(points)
}
