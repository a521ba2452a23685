//! Numeric checks of the curve hypotheses.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;

use super::{RhoChart, SpectralCurveLocal};
use crate::scalar::Scalar;

/// Angles sampled on each boundary circle `|ρ| = R`.
pub const DISC_SAMPLES: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    RadiusOutOfRange,
    DyVanishes { id: String },
    DiscsNotDisjoint { detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RadiusOutOfRange => f.write_str("R must lie in (0,1)"),
            Violation::DyVanishes { id } => write!(f, "dy vanishes at ramification point `{id}`"),
            Violation::DiscsNotDisjoint { detail } => write!(f, "discs not disjoint: {detail}"),
        }
    }
}

pub(super) fn validate<F: Scalar>(curve: &SpectralCurveLocal<F>) -> Vec<Violation> {
    let mut out = Vec::new();
    let r = curve.radius().to_c64();
    let radius_ok = r.im == 0.0 && r.re > 0.0 && r.re < 1.0;
    if !radius_ok {
        out.push(Violation::RadiusOutOfRange);
    }
    for p in curve.points() {
        if p.y_coeffs.get(1).is_none_or(|c| c.is_zero()) {
            out.push(Violation::DyVanishes { id: p.id.clone() });
        }
    }
    let pts = curve.points();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i].x_value == pts[j].x_value {
                out.push(Violation::DiscsNotDisjoint { detail: alloc::format!("points `{}` and `{}` have the same x value", pts[i].id, pts[j].id) });
            }
        }
    }
    if radius_ok && !out.iter().any(|v| matches!(v, Violation::DiscsNotDisjoint { .. })) {
        if let Some(v) = check_discs(curve, r.re) {
            out.push(v);
        }
    }
    out
}

fn check_discs<F: Scalar>(curve: &SpectralCurveLocal<F>, r: f64) -> Option<Violation> {
    let xs: Vec<Complex64> = curve.points().iter().map(|p| p.x_value.to_c64()).collect();
    if xs.len() > 1 {
        // The sublevel set |P(x)| ≤ R² splits into one component per root
        // exactly when R² lies below every critical value of P.
        let crit = critical_values(&xs).into_iter().fold(f64::INFINITY, f64::min);
        if r * r >= crit {
            return Some(Violation::DiscsNotDisjoint {
                detail: alloc::format!("R² = {} reaches the critical value {crit:.6e} of ∏(x − x(a))", r * r),
            });
        }
    }
    for (a, p) in curve.points().iter().enumerate() {
        let chart = RhoChart::new(curve, a);
        for j in 0..DISC_SAMPLES {
            let theta = 2.0 * PI * j as f64 / DISC_SAMPLES as f64;
            let Some(z) = chart.zeta_of_rho(Complex64::from_polar(r, theta)) else {
                return Some(Violation::DiscsNotDisjoint { detail: alloc::format!("the chart at `{}` does not reach |ρ| = R", p.id) });
            };
            let x = xs[a] + z * z;
            let owner = (0..xs.len()).min_by(|&u, &v| (x - xs[u]).norm().total_cmp(&(x - xs[v]).norm())).unwrap_or(a);
            if owner != a {
                return Some(Violation::DiscsNotDisjoint {
                    detail: alloc::format!("boundary of the disc at `{}` is closer to `{}`", p.id, curve.points()[owner].id),
                });
            }
        }
    }
    None
}

/// `|P(c)|` at the roots `c` of `P'`, `P = ∏(x − x_i)`.
fn critical_values(xs: &[Complex64]) -> Vec<f64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for x in xs {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * x;
        }
        coeffs = next;
    }
    let deriv: Vec<Complex64> = coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
    let eval = |x: Complex64| xs.iter().fold(Complex64::new(1.0, 0.0), |acc, r| acc * (x - r));
    polynomial_roots(&deriv).into_iter().map(|c| eval(c).norm()).collect()
}

/// Durand–Kerner iteration for the roots of `Σ c_k x^k`.
fn polynomial_roots(c: &[Complex64]) -> Vec<Complex64> {
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|v| v / lead).collect();
    let eval = |x: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, v| acc * x + v);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powi(k as i32)).collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::super::{builtin_airy, builtin_cubic, RamPoint, SpectralCurveLocal};
    use super::*;
    use crate::scalar::Exact;
    use alloc::string::ToString;

    #[test]
    fn builtins_are_valid() {
        assert!(builtin_airy::<Exact>(&()).validate().is_empty());
        assert!(builtin_cubic::<Exact>(&(), 8).validate().is_empty());
    }

    #[test]
    fn radius_outside_unit_interval() {
        let c = builtin_airy::<Exact>(&()).with_radius(Exact::ratio(3, 2));
        let v = c.validate();
        assert_eq!(v, vec![Violation::RadiusOutOfRange]);
        assert_eq!(v[0].to_string(), "R must lie in (0,1)");
    }

    #[test]
    fn flat_y_is_rejected() {
        let p = RamPoint { id: "a".to_string(), x_value: Exact::int(0), y_coeffs: vec![Exact::int(0), Exact::int(0), Exact::int(1)], trunc: None };
        let c = SpectralCurveLocal::new(&(), "t", vec![p], vec![], Exact::ratio(1, 2)).unwrap();
        let v = c.validate();
        assert!(v[0].to_string().starts_with("dy vanishes at ramification point"));
    }

    #[test]
    fn coinciding_points_are_not_disjoint() {
        let mk = |id: &str| RamPoint { id: id.to_string(), x_value: Exact::int(1), y_coeffs: vec![Exact::int(0), Exact::int(1)], trunc: None };
        let c = SpectralCurveLocal::new(&(), "t", vec![mk("a"), mk("b")], vec![], Exact::ratio(1, 2)).unwrap();
        assert!(c.validate()[0].to_string().starts_with("discs not disjoint"));
    }

    #[test]
    fn large_radius_merges_cubic_discs() {
        // Critical value of (x − 2/3)(x + 2/3) is 4/9, so R = 2/3 touches it.
        let c = builtin_cubic::<Exact>(&(), 6).with_radius(Exact::ratio(7, 10));
        assert!(matches!(c.validate()[0], Violation::DiscsNotDisjoint { .. }));
        let ok = builtin_cubic::<Exact>(&(), 6).with_radius(Exact::ratio(65, 100));
        assert!(ok.validate().is_empty());
    }
}
