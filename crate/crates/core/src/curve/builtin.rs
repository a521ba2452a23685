//! Builtin curves.
//!
//! * `airy`: `x = ζ²`, `y = ζ`, `B` with no regular part.
//! * `cubic`: `x = z³/3 − z`, `y = z²`, `B = dz₁dz₂/(z₁−z₂)²` on the sphere.
//! * `cubic-linear`: the same `x` and `B` with `y = z`.
//!
//! The cubic curves are lowered to local data at `z = ±1` by inverting
//! `x − x(±1) = ζ²` as a series `z(ζ)`.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::{BRegularPart, RamPoint, SpectralCurveLocal};
use crate::scalar::Scalar;

pub const BUILTIN_NAMES: [&str; 3] = ["airy", "cubic", "cubic-linear"];

/// Looks up a builtin by name; cubic curves are lowered to order `trunc`.
pub fn builtin<F: Scalar>(ctx: &F::Ctx, name: &str, trunc: usize) -> Option<SpectralCurveLocal<F>> {
    match name {
        "airy" => Some(builtin_airy(ctx)),
        "cubic" => Some(builtin_cubic(ctx, trunc)),
        "cubic-linear" => Some(builtin_cubic_linear(ctx, trunc)),
        _ => None,
    }
}

pub fn builtin_airy<F: Scalar>(ctx: &F::Ctx) -> SpectralCurveLocal<F> {
    let point = RamPoint { id: "a".to_string(), x_value: F::zero(ctx), y_coeffs: vec![F::zero(ctx), F::one(ctx)], trunc: None };
    SpectralCurveLocal::new(ctx, "airy", vec![point], vec![BRegularPart::zero((0, 0), None)], F::from_ratio(ctx, 1, 2))
        .expect("airy data is consistent")
}

/// `x = z³/3 − z`, `y = z²`.
pub fn builtin_cubic<F: Scalar>(ctx: &F::Ctx, trunc: usize) -> SpectralCurveLocal<F> {
    lower_cubic(ctx, "cubic", &[0, 0, 1], trunc)
}

/// `x = z³/3 − z`, `y = z`.
pub fn builtin_cubic_linear<F: Scalar>(ctx: &F::Ctx, trunc: usize) -> SpectralCurveLocal<F> {
    lower_cubic(ctx, "cubic-linear", &[0, 1], trunc)
}

fn lower_cubic<F: Scalar>(ctx: &F::Ctx, name: &str, y_poly: &[i64], trunc: usize) -> SpectralCurveLocal<F> {
    let centers = [1i64, -1];
    let ids = ["a", "b"];
    let n = trunc;
    // w_a(ζ) = z − z_a up to ζ^(2n+3): the self part needs that many.
    let charts: Vec<Vec<F>> = centers.iter().map(|&za| chart_inverse(ctx, za, 2 * n + 3)).collect();
    let points = centers
        .iter()
        .zip(ids)
        .zip(&charts)
        .map(|((&za, id), w)| {
            // x(z_a) = z_a³/3 − z_a
            let x_value = F::from_ratio(ctx, za * za * za - 3 * za, 3);
            let mut z = w[..=n].to_vec();
            z[0] = F::from_i64(ctx, za);
            let y_poly: Vec<F> = y_poly.iter().map(|&c| F::from_i64(ctx, c)).collect();
            RamPoint { id: id.to_string(), x_value, y_coeffs: compose_poly(ctx, &y_poly, &z), trunc: Some(n) }
        })
        .collect();
    let mut parts = Vec::new();
    for (a, chart) in charts.iter().enumerate() {
        parts.push(BRegularPart { pair: (a, a), coeffs: beta_self(ctx, chart, n), trunc: Some(n) });
    }
    let delta = F::from_i64(ctx, centers[0] - centers[1]);
    parts.push(BRegularPart { pair: (0, 1), coeffs: beta_cross(ctx, &charts[0], &charts[1], &delta, n), trunc: Some(n) });
    SpectralCurveLocal::new(ctx, name, points, parts, F::from_ratio(ctx, 1, 2)).expect("lowered cubic data is consistent")
}

/// Coefficients `w_0..=w_len` of `w(ζ)` solving `z_a w² + w³/3 = ζ²`, the
/// chart equation `ζ² = x(z_a + w) − x(z_a)` for `x = z³/3 − z`.
///
/// `w₁ = 1/√z_a` (principal root); comparing coefficients of `ζ^{k+1}`
/// determines `w_k` from lower ones.
fn chart_inverse<F: Scalar>(ctx: &F::Ctx, za: i64, len: usize) -> Vec<F> {
    let c2 = F::from_i64(ctx, za);
    let w1 = F::one(ctx) / &c2.sqrt().expect("square root of ±1 is representable");
    let third = F::from_ratio(ctx, 1, 3);
    let pivot = F::from_i64(ctx, 2 * za) * &w1;
    let mut w = vec![F::zero(ctx); len + 1];
    // sq[m] = [ζ^m] w²
    let mut sq = vec![F::zero(ctx); len + 2];
    if len >= 1 {
        w[1] = w1.clone();
        sq[2] = w1.clone() * &w1;
    }
    for k in 2..=len {
        // [ζ^{k+1}]: z_a (2 w₁ w_k + Σ_{i+j=k+1, 2≤i,j≤k−1} w_i w_j) + [ζ^{k+1}] w³/3 = 0
        // sq[k] only involves w_1..w_{k−1}.
        let mut acc = F::zero(ctx);
        for i in 1..k {
            acc.mul_add_assign(&w[i], &w[k - i]);
        }
        sq[k] = acc;
        let mut partial = F::zero(ctx);
        for i in 2..k {
            partial.mul_add_assign(&w[i], &w[k + 1 - i]);
        }
        let mut cube = F::zero(ctx);
        for i in 1..k {
            cube.mul_add_assign(&w[i], &sq[k + 1 - i]);
        }
        let rhs = c2.clone() * &partial + &(cube * &third);
        w[k] = -(rhs / &pivot);
    }
    w
}

fn ps_mul<F: Scalar>(ctx: &F::Ctx, a: &[F], b: &[F], len: usize) -> Vec<F> {
    let mut out = vec![F::zero(ctx); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j].mul_add_assign(x, y);
        }
    }
    out
}

fn ps_inverse<F: Scalar>(ctx: &F::Ctx, a: &[F], len: usize) -> Vec<F> {
    let mut out: Vec<F> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = if k == 0 { F::one(ctx) } else { F::zero(ctx) };
        for j in 1..=k.min(a.len() - 1) {
            acc -= &(a[j].clone() * &out[k - j]);
        }
        out.push(acc / &a[0]);
    }
    out
}

/// `p(z(ζ))` truncated to the length of `z`.
fn compose_poly<F: Scalar>(ctx: &F::Ctx, p: &[F], z: &[F]) -> Vec<F> {
    let len = z.len();
    let mut out = vec![F::zero(ctx); len];
    for c in p.iter().rev() {
        out = ps_mul(ctx, &out, z, len);
        out[0] += c;
    }
    out
}

/// Regular part of `w'(s) w'(t)/(w(s) − w(t))² − 1/(s − t)²`.
///
/// With `w = s·φ(s)` and `ψ = 1/φ`, expanding `w'(s)/(w(s) − w(t))` in
/// powers of `w(t)` gives
/// `β_{k,l−1} = −l Σ_{m=1}^{l} [t^{l−m}]φ^m · (k+1)/m · [s^{k+1+m}]ψ^m`.
#[allow(clippy::needless_range_loop)]
fn beta_self<F: Scalar>(ctx: &F::Ctx, w: &[F], n: usize) -> Vec<Vec<F>> {
    let len = 2 * n + 3;
    let phi: Vec<F> = w[1..].iter().take(len).cloned().collect();
    let psi = ps_inverse(ctx, &phi, len);
    let mut out = vec![vec![F::zero(ctx); n + 1]; n + 1];
    let mut phi_m = vec![F::one(ctx)];
    let mut psi_m = vec![F::one(ctx)];
    for m in 1..=n + 1 {
        phi_m = ps_mul(ctx, &phi_m, &phi, n + 2 - m);
        psi_m = ps_mul(ctx, &psi_m, &psi, n + 2 + m);
        let inv_m = F::from_ratio(ctx, 1, m as i64);
        for l in m..=n + 1 {
            let a = &phi_m[l - m];
            if a.is_zero() {
                continue;
            }
            let al = a.clone() * &F::from_i64(ctx, -(l as i64)) * &inv_m;
            for (k, row) in out.iter_mut().enumerate() {
                let b = &psi_m[k + 1 + m];
                if !b.is_zero() {
                    row[l - 1].mul_add_assign(&al, &(b.clone() * &F::from_i64(ctx, k as i64 + 1)));
                }
            }
        }
    }
    // Exact arithmetic gives a symmetric table already; mirroring keeps
    // rounded modes symmetric too.
    for k in 1..=n {
        for l in 0..k {
            let v = out[l][k].clone();
            out[k][l] = v;
        }
    }
    out
}

/// `P[p][k] = [s^k] w(s)^p w'(s)` for `p, k ≤ n`.
fn power_derivatives<F: Scalar>(ctx: &F::Ctx, w: &[F], n: usize) -> Vec<Vec<F>> {
    let len = n + 2;
    let mut out = Vec::with_capacity(n + 1);
    let mut wp = vec![F::one(ctx)];
    for p in 0..=n {
        wp = ps_mul(ctx, &wp, w, len);
        // w^p w' = (w^{p+1})'/(p+1)
        let inv = F::from_ratio(ctx, 1, p as i64 + 1);
        out.push((0..=n).map(|k| wp[k + 1].clone() * &F::from_i64(ctx, k as i64 + 1) * &inv).collect());
    }
    out
}

/// Regular part of `w_a'(s) w_b'(t)/(Δ + w_a(s) − w_b(t))²`, `Δ = z_a − z_b`,
/// from `1/(Δ + u − v)² = Σ (−1)^p (p+q+1)!/(p! q!) u^p v^q / Δ^{p+q+2}`.
#[allow(clippy::needless_range_loop)]
fn beta_cross<F: Scalar>(ctx: &F::Ctx, wa: &[F], wb: &[F], delta: &F, n: usize) -> Vec<Vec<F>> {
    let pa = power_derivatives(ctx, wa, n);
    let pb = power_derivatives(ctx, wb, n);
    let inv_delta = F::one(ctx) / delta;
    // c[p][q], built along q from c[p][0] = (−1)^p (p+1) Δ^{−p−2}.
    let mut c = vec![vec![F::zero(ctx); n + 1]; n + 1];
    let mut head = inv_delta.clone() * &inv_delta;
    for p in 0..=n {
        if p > 0 {
            head = -(head * &inv_delta);
        }
        let mut v = head.clone() * &F::from_i64(ctx, p as i64 + 1);
        for q in 0..=n {
            if q > 0 {
                v = v * &F::from_ratio(ctx, (p + q + 1) as i64, q as i64) * &inv_delta;
            }
            c[p][q] = v.clone();
        }
    }
    // (C·P_b)[p][l], then P_aᵀ on the left; P[p][k] vanishes for p > k.
    let mut cpb = vec![vec![F::zero(ctx); n + 1]; n + 1];
    for p in 0..=n {
        for q in 0..=n {
            for l in q..=n {
                cpb[p][l].mul_add_assign(&c[p][q], &pb[q][l]);
            }
        }
    }
    let mut out = vec![vec![F::zero(ctx); n + 1]; n + 1];
    for k in 0..=n {
        for p in 0..=k {
            for l in 0..=n {
                out[k][l].mul_add_assign(&pa[p][k], &cpb[p][l]);
            }
        }
    }
    out
}
