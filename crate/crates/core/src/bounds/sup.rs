//! Sampled estimates of the suprema `B`, `C` and `C̃`.
//!
//! The weighted expressions are holomorphic in each variable on the discs,
//! so boundary circles are sampled first and interior radii
//! `R(1 − 2^{−j})` after them. The best grid points are then polished by a
//! pattern search, and the whole pass is repeated with twice the angular
//! resolution and one more radius until the value settles.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::BoundsError;
use crate::curve::{RhoChart, SpectralCurveLocal};
use crate::scalar::Scalar;

/// Grid sizes and stopping rule for the sup estimates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingConfig {
    pub angles: usize,
    pub radii: usize,
    pub max_levels: usize,
    pub rel_tol: f64,
    /// Grid maxima polished by pattern search at each level.
    pub polish: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { angles: 32, radii: 3, max_levels: 6, rel_tol: 1e-6, polish: 4 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplingMeta {
    /// Angles per circle at the final level.
    pub angles: usize,
    /// Circles per disc at the final level, the boundary included.
    pub radii: usize,
    /// Refinement levels run.
    pub levels: usize,
    pub evaluations: u64,
    /// Relative change at the last refinement.
    pub last_change: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupEstimate {
    pub value: f64,
    pub meta: SamplingMeta,
}

/// `C`, `B` and `C̃` for one curve.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundConstants {
    pub c_sup: f64,
    pub b_sup: f64,
    pub ctilde: f64,
    pub radius: f64,
    pub c_meta: SamplingMeta,
    pub b_meta: SamplingMeta,
    pub phi_meta: SamplingMeta,
}

/// Double-precision view of the curve data used by the samplers.
#[derive(Clone, Debug)]
pub struct CurveNumerics {
    pub np: usize,
    pub radius: f64,
    pub charts: Vec<RhoChart>,
    y: Vec<Vec<Complex64>>,
    /// `beta[a][b][j][l]`, `j` the power of `ζ_a`.
    beta: Vec<Vec<Vec<Vec<Complex64>>>>,
}

/// A sampled point with the per-point parts of the pair expressions.
#[derive(Clone, Debug)]
struct Point {
    disc: usize,
    r: f64,
    theta: f64,
    zeta: Complex64,
    rho: Complex64,
    drho: Complex64,
    pows: Vec<Complex64>,
    /// `b_vec[b][j] = Σ_l β^{ba}_{jl} ζ^l`.
    b_vec: Vec<Vec<Complex64>>,
    /// `k_vec[b][j] = Σ_{l even} β^{ba}_{jl} 2ζ^{l+1}/(l+1)`.
    k_vec: Vec<Vec<Complex64>>,
    /// `8 ζ y_odd(ζ)`.
    k_den: Complex64,
}

impl CurveNumerics {
    pub fn new<F: Scalar>(curve: &SpectralCurveLocal<F>) -> Self {
        let np = curve.num_points();
        let y = curve.points().iter().map(|p| p.y_coeffs.iter().map(Scalar::to_c64).collect()).collect();
        let beta = (0..np)
            .map(|a| {
                (0..np)
                    .map(|b| {
                        let part = curve.b_part(a, b);
                        part.coeffs.iter().map(|row| row.iter().map(Scalar::to_c64).collect()).collect()
                    })
                    .collect()
            })
            .collect();
        CurveNumerics { np, radius: curve.radius().to_c64().re, charts: (0..np).map(|a| RhoChart::new(curve, a)).collect(), y, beta }
    }

    fn reg_len(&self) -> usize {
        self.beta.iter().flatten().map(|m| m.len()).max().unwrap_or(0)
    }

    fn point(&self, disc: usize, r: f64, theta: f64) -> Option<Point> {
        let chart = &self.charts[disc];
        let rho = Complex64::from_polar(r, theta);
        let zeta = chart.zeta_of_rho(rho)?;
        let len = self.reg_len();
        let mut pows = Vec::with_capacity(len);
        let mut p = Complex64::new(1.0, 0.0);
        for _ in 0..len {
            pows.push(p);
            p *= zeta;
        }
        let mut b_vec = Vec::with_capacity(self.np);
        let mut k_vec = Vec::with_capacity(self.np);
        for b in 0..self.np {
            let m = &self.beta[b][disc];
            let bv: Vec<Complex64> = m.iter().map(|row| row.iter().zip(&pows).map(|(c, z)| c * z).sum()).collect();
            let kv: Vec<Complex64> = m
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .step_by(2)
                        .map(|(l, c)| c * pows.get(l).copied().unwrap_or_else(|| zeta.powu(l as u32)) * zeta * (2.0 / (l as f64 + 1.0)))
                        .sum()
                })
                .collect();
            b_vec.push(bv);
            k_vec.push(kv);
        }
        let y_odd: Complex64 = self.y[disc].iter().enumerate().skip(1).step_by(2).map(|(k, c)| c * zeta.powu(k as u32)).sum();
        Some(Point { disc, r, theta, zeta, rho: chart.rho(zeta), drho: chart.drho(zeta), pows, b_vec, k_vec, k_den: zeta * y_odd * 8.0 })
    }

    /// `|B(p₁,p)/(dρ(p)dρ(p₁))|·|ρ(p) − ρ(p₁)|²`.
    fn b_expr(p1: &Point, p: &Point) -> f64 {
        let reg: Complex64 = p1.pows.iter().zip(&p.b_vec[p1.disc]).map(|(x, y)| x * y).sum();
        let d = p.rho - p1.rho;
        let mut b = reg;
        if p1.disc == p.disc {
            let dz = p1.zeta - p.zeta;
            b += 1.0 / (dz * dz);
        }
        (b / (p.drho * p1.drho)).norm() * d.norm_sqr()
    }

    /// `|𝔯|·|K(p₁,p) dρ(p)/dρ(p₁)|·|ρ(p)² − ρ(p₁)²|·|ρ(p)|`.
    fn c_expr(&self, p1: &Point, p: &Point) -> f64 {
        let mut integral: Complex64 = p1.pows.iter().zip(&p.k_vec[p1.disc]).map(|(x, y)| x * y).sum();
        if p1.disc == p.disc {
            integral += 2.0 * p.zeta / (p1.zeta * p1.zeta - p.zeta * p.zeta);
        }
        let k = integral / p.k_den;
        let w = (p.rho * p.rho - p1.rho * p1.rho).norm() * p.rho.norm();
        self.np as f64 * (k * p.drho / p1.drho).norm() * w
    }

    /// `|Φ_a(p)|·|ρ(p)|^{−3}` with `Φ_a = Σ_{m≥1} 2 y_m ζ^{m+2}/(m+2)`.
    fn phi_expr(&self, p: &Point) -> f64 {
        let phi: Complex64 = self.y[p.disc].iter().enumerate().skip(1).map(|(m, c)| c * p.zeta.powu(m as u32 + 2) * (2.0 / (m as f64 + 2.0))).sum();
        phi.norm() / libm::pow(p.rho.norm(), 3.0)
    }

    fn radii(&self, count: usize) -> Vec<f64> {
        let mut r = vec![self.radius];
        for j in 1..count {
            r.push(self.radius * (1.0 - libm::pow(2.0, -(j as f64))));
        }
        r
    }

    fn grid(&self, angles: usize, radii: usize, offset: f64) -> Result<Vec<Point>, BoundsError> {
        let mut out = Vec::new();
        for disc in 0..self.np {
            for r in self.radii(radii) {
                for i in 0..angles {
                    let theta = 2.0 * PI * (i as f64 + offset) / angles as f64;
                    out.push(self.point(disc, r, theta).ok_or(BoundsError::ChartFailure { disc, r, theta })?);
                }
            }
        }
        Ok(out)
    }

    /// Points closer than this in `ζ` are nudged apart before evaluating a
    /// pair expression whose two factors vanish and blow up together.
    const COINCIDENCE: f64 = 1e-7;

    fn pair_value(&self, which: Pair, p1: &Point, p: &Point) -> Result<f64, BoundsError> {
        let close = p1.disc == p.disc
            && ((p1.zeta - p.zeta).norm() < Self::COINCIDENCE || (which == Pair::C && (p1.zeta + p.zeta).norm() < Self::COINCIDENCE));
        let nudged;
        let q1 = if close {
            nudged = self.point(p1.disc, p1.r, p1.theta + 1e-5).ok_or(BoundsError::ChartFailure { disc: p1.disc, r: p1.r, theta: p1.theta })?;
            &nudged
        } else {
            p1
        };
        let v = match which {
            Pair::B => Self::b_expr(q1, p),
            Pair::C => self.c_expr(q1, p),
        };
        if !v.is_finite() {
            return Err(BoundsError::NonFinite { what: which.name(), disc: p.disc, r: p.r, theta: p.theta });
        }
        Ok(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pair {
    B,
    C,
}

impl Pair {
    fn name(self) -> &'static str {
        match self {
            Pair::B => "B",
            Pair::C => "C",
        }
    }
}

/// Coordinate pattern search for a maximum over boxes `lo ≤ x ≤ hi`
/// (angles unbounded), halving the step when no neighbour improves.
fn pattern_max(mut x: Vec<f64>, mut step: Vec<f64>, lo: &[f64], hi: &[f64], mut f: impl FnMut(&[f64]) -> Option<f64>, evals: &mut u64) -> f64 {
    let mut best = f(&x).unwrap_or(f64::NEG_INFINITY);
    *evals += 1;
    for _ in 0..400 {
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] = (y[i] + dir * step[i]).clamp(lo[i], hi[i]);
                if y[i] == x[i] {
                    continue;
                }
                *evals += 1;
                if let Some(v) = f(&y) {
                    if v > best {
                        best = v;
                        x = y;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            for s in step.iter_mut() {
                *s *= 0.5;
            }
            if step.iter().all(|s| *s < 1e-10) {
                break;
            }
        }
    }
    best
}

fn top_k(values: &[(f64, usize, usize)], k: usize) -> Vec<(f64, usize, usize)> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.0.total_cmp(&a.0));
    v.truncate(k);
    v
}

fn estimate_pair(num: &CurveNumerics, cfg: &SamplingConfig, which: Pair) -> Result<SupEstimate, BoundsError> {
    let mut value = 0.0f64;
    let mut evals = 0u64;
    let mut last_change = f64::INFINITY;
    let mut levels = 0;
    let (mut angles, mut radii) = (cfg.angles, cfg.radii);
    let r_lo = num.radius * 0.5;
    for level in 0..cfg.max_levels {
        levels = level + 1;
        let ps = num.grid(angles, radii, 0.0)?;
        let p1s = num.grid(angles, radii, 0.5)?;
        let mut scores = Vec::with_capacity(ps.len() * p1s.len());
        for (i, p1) in p1s.iter().enumerate() {
            for (j, p) in ps.iter().enumerate() {
                scores.push((num.pair_value(which, p1, p)?, i, j));
            }
        }
        evals += scores.len() as u64;
        let mut level_best = scores.iter().map(|s| s.0).fold(0.0, f64::max);
        for (_, i, j) in top_k(&scores, cfg.polish) {
            let (p1, p) = (&p1s[i], &ps[j]);
            let (d1, d) = (p1.disc, p.disc);
            let lo = [r_lo.min(p1.r), -f64::INFINITY, r_lo.min(p.r), -f64::INFINITY];
            let hi = [num.radius, f64::INFINITY, num.radius, f64::INFINITY];
            let step = vec![num.radius / 16.0, PI / angles as f64, num.radius / 16.0, PI / angles as f64];
            let v = pattern_max(
                vec![p1.r, p1.theta, p.r, p.theta],
                step,
                &lo,
                &hi,
                |x| {
                    let q1 = num.point(d1, x[0], x[1])?;
                    let q = num.point(d, x[2], x[3])?;
                    num.pair_value(which, &q1, &q).ok()
                },
                &mut evals,
            );
            level_best = level_best.max(v);
        }
        let next = value.max(level_best);
        if level > 0 {
            last_change = (next - value).abs() / next.max(f64::MIN_POSITIVE);
        }
        value = next;
        if level > 0 && last_change <= cfg.rel_tol {
            break;
        }
        angles *= 2;
        radii += 1;
    }
    let converged = last_change <= cfg.rel_tol;
    Ok(SupEstimate { value, meta: SamplingMeta { angles, radii, levels, evaluations: evals, last_change, converged } })
}

pub fn estimate_sup_b<F: Scalar>(curve: &SpectralCurveLocal<F>, cfg: &SamplingConfig) -> Result<SupEstimate, BoundsError> {
    estimate_pair(&CurveNumerics::new(curve), cfg, Pair::B)
}

pub fn estimate_sup_c<F: Scalar>(curve: &SpectralCurveLocal<F>, cfg: &SamplingConfig) -> Result<SupEstimate, BoundsError> {
    estimate_pair(&CurveNumerics::new(curve), cfg, Pair::C)
}

/// `sup |Φ(p) − Φ(a)|·|ρ(p)|^{−3}`, the per-disc suprema maximized over
/// discs.
pub fn estimate_phi_ratio<F: Scalar>(curve: &SpectralCurveLocal<F>, cfg: &SamplingConfig) -> Result<SupEstimate, BoundsError> {
    let num = CurveNumerics::new(curve);
    let mut value = 0.0f64;
    let mut evals = 0u64;
    let mut last_change = f64::INFINITY;
    let mut levels = 0;
    let (mut angles, mut radii) = (cfg.angles, cfg.radii);
    for level in 0..cfg.max_levels {
        levels = level + 1;
        let ps = num.grid(angles, radii, 0.0)?;
        let mut scores = Vec::with_capacity(ps.len());
        for (i, p) in ps.iter().enumerate() {
            let v = num.phi_expr(p);
            if !v.is_finite() {
                return Err(BoundsError::NonFinite { what: "Phi", disc: p.disc, r: p.r, theta: p.theta });
            }
            scores.push((v, i, i));
        }
        evals += scores.len() as u64;
        let mut level_best = scores.iter().map(|s| s.0).fold(0.0, f64::max);
        for (_, i, _) in top_k(&scores, cfg.polish) {
            let p = &ps[i];
            let d = p.disc;
            let v = pattern_max(
                vec![p.r, p.theta],
                vec![num.radius / 16.0, PI / angles as f64],
                &[num.radius * 0.5, -f64::INFINITY],
                &[num.radius, f64::INFINITY],
                |x| num.point(d, x[0], x[1]).map(|q| num.phi_expr(&q)).filter(|v| v.is_finite()),
                &mut evals,
            );
            level_best = level_best.max(v);
        }
        let next = value.max(level_best);
        if level > 0 {
            last_change = (next - value).abs() / next.max(f64::MIN_POSITIVE);
        }
        value = next;
        if level > 0 && last_change <= cfg.rel_tol {
            break;
        }
        angles *= 2;
        radii += 1;
    }
    let converged = last_change <= cfg.rel_tol;
    Ok(SupEstimate { value, meta: SamplingMeta { angles, radii, levels, evaluations: evals, last_change, converged } })
}

/// All three constants; `C̃ = (1/#𝔯)·B·C·sup|Φ − Φ(a)|/|ρ|³`.
pub fn estimate_constants<F: Scalar>(curve: &SpectralCurveLocal<F>, cfg: &SamplingConfig) -> Result<BoundConstants, BoundsError> {
    let num = CurveNumerics::new(curve);
    let b = estimate_pair(&num, cfg, Pair::B)?;
    let c = estimate_pair(&num, cfg, Pair::C)?;
    let phi = estimate_phi_ratio(curve, cfg)?;
    let ctilde = b.value * c.value * phi.value / num.np as f64;
    Ok(BoundConstants { c_sup: c.value, b_sup: b.value, ctilde, radius: num.radius, c_meta: c.meta, b_meta: b.meta, phi_meta: phi.meta })
}
