//! Topological recursion on local spectral curves.

mod eval;
mod fg;
mod form;
pub(crate) mod recursion;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::curve::{CurveError, SpectralCurveLocal, TruncationExceeded};
use crate::scalar::Scalar;
use crate::series::{LaurentSeries, SeriesError};
use recursion::{closure, Builder};

pub use eval::{omega_eval, w_eval, FormEvaluator};
pub use fg::compute_fg;
pub use form::{dim, euler, Key, OmegaForm, Slot};

/// The three groups of the recursion plus the base cases and the kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermGroup {
    Kernel,
    Base,
    Splitting,
    Degenerate,
    Insertion,
}

impl fmt::Display for TermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermGroup::Kernel => "recursion kernel",
            TermGroup::Base => "base case",
            TermGroup::Splitting => "stable splitting sum",
            TermGroup::Degenerate => "(g-1, n+2) term",
            TermGroup::Insertion => "B(σ(p), p_j) insertion sum",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EngineError {
    #[error("ω_{{{g},{n}}}: {term} needs exponent {needed} but the curve data is known only to {known}")]
    Truncation { g: usize, n: usize, term: TermGroup, needed: i64, known: i64 },
    #[error("kernel data at point #{point}: {source}")]
    KernelData { point: usize, source: TruncationExceeded },
    #[error("dy vanishes at point #{point}, the kernel is undefined")]
    DegenerateKernel { point: usize },
    #[error("chi_max must be at least 1")]
    EmptyLevelRange,
    #[error("F_g is defined for g ≥ 2, got g = {0}")]
    GenusTooSmall(usize),
    #[error("ω_{{{0},{1}}} is not in the table")]
    MissingForm(usize, usize),
    #[error("point index {0} out of range")]
    UnknownPoint(usize),
    #[error("ω_{{{g},{n}}} takes {n} points, got {got}")]
    Arity { g: usize, n: usize, got: usize },
    #[error("ζ = 0 is a pole of every basis differential")]
    ZeroZeta,
    #[error("point outside Σ_R at #{point}: |ρ| = {rho:.6} > R = {radius:.6}")]
    OutsideDisc { point: usize, rho: f64, radius: f64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Computed forms keyed by `(g, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrTable<F: Scalar> {
    forms: BTreeMap<(usize, usize), OmegaForm<F>>,
}

impl<F: Scalar> TrTable<F> {
    pub fn get(&self, g: usize, n: usize) -> Option<&OmegaForm<F>> {
        self.forms.get(&(g, n))
    }

    pub fn form(&self, g: usize, n: usize) -> Result<&OmegaForm<F>, EngineError> {
        self.get(g, n).ok_or(EngineError::MissingForm(g, n))
    }

    /// Forms in increasing `2g − 2 + n`, then `g`.
    pub fn iter(&self) -> impl Iterator<Item = &OmegaForm<F>> + '_ {
        let mut v: Vec<&OmegaForm<F>> = self.forms.values().collect();
        v.sort_by_key(|f| (euler(f.g, f.n), f.g));
        v.into_iter()
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn map_scalars<G: Scalar>(&self, f: impl Fn(&F) -> G) -> TrTable<G> {
        TrTable { forms: self.forms.iter().map(|(k, v)| (*k, v.map_scalars(&f))).collect() }
    }
}

/// Tuning knobs for table construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    /// Skip keys with `Σ k/2 > d_{g,n}`, which always vanish.
    pub degree_filter: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { degree_filter: true }
    }
}

/// All `ω_{g,n}` with `1 ≤ 2g − 2 + n ≤ chi_max`, `n ≥ 1`.
pub fn tr_table<F: Scalar>(curve: &SpectralCurveLocal<F>, chi_max: usize) -> Result<TrTable<F>, EngineError> {
    if chi_max < 1 {
        return Err(EngineError::EmptyLevelRange);
    }
    let mut targets = Vec::new();
    for chi in 1..=chi_max as i64 {
        for g in 0..=((chi + 1) / 2) as usize {
            let n = chi - 2 * g as i64 + 2;
            if n >= 1 {
                targets.push((g, n as usize));
            }
        }
    }
    build(curve, &targets, EngineOptions::default())
}

/// The forms `ω_{g,1}`, `2 ≤ g ≤ g_max`, together with everything they
/// depend on.
pub fn tr_table_for_fg<F: Scalar>(curve: &SpectralCurveLocal<F>, g_max: usize) -> Result<TrTable<F>, EngineError> {
    if g_max < 2 {
        return Err(EngineError::GenusTooSmall(g_max));
    }
    let targets: Vec<(usize, usize)> = (2..=g_max).map(|g| (g, 1)).collect();
    build(curve, &targets, EngineOptions::default())
}

/// Computes `targets` and their dependency closure, level by level.
pub fn build<F: Scalar>(curve: &SpectralCurveLocal<F>, targets: &[(usize, usize)], options: EngineOptions) -> Result<TrTable<F>, EngineError> {
    Ok(TrTable { forms: run(curve, targets, options)?.forms })
}

pub(crate) fn run<'c, F: Scalar>(
    curve: &'c SpectralCurveLocal<F>,
    targets: &[(usize, usize)],
    options: EngineOptions,
) -> Result<Builder<'c, F>, EngineError> {
    let (all, factors) = closure(targets);
    let mut builder = prepare(curve, &all, factors, options)?;
    let mut order: Vec<(usize, usize)> = all.into_iter().collect();
    order.sort_by_key(|&(g, n)| (euler(g, n), g));
    for (g, n) in order {
        builder.compute(g, n)?;
    }
    Ok(builder)
}

fn prepare<'c, F: Scalar>(
    curve: &'c SpectralCurveLocal<F>,
    all: &BTreeSet<(usize, usize)>,
    factors: BTreeSet<(usize, usize)>,
    options: EngineOptions,
) -> Result<Builder<'c, F>, EngineError> {
    let d_max = all.iter().map(|&(g, n)| dim(g, n)).max().unwrap_or(0).max(0) as usize;
    let mut b = Builder::new(curve, d_max, factors)?;
    b.degree_filter = options.degree_filter;
    Ok(b)
}

/// `Res_{ζ→0} K(p₁, ζ)·Q(ζ)` for `ζ = ζ_a`, expanded on `p₁` as a map
/// `(b, e) ↦ coefficient of ζ_b(p₁)^e dζ_b(p₁)`.
///
/// Regular exponents are reported up to `regular_ceiling`.
pub fn project_residue<F: Scalar>(
    curve: &SpectralCurveLocal<F>,
    a: usize,
    q: &LaurentSeries<F>,
    regular_ceiling: usize,
) -> Result<BTreeMap<(usize, i64), F>, EngineError> {
    if a >= curve.num_points() {
        return Err(EngineError::UnknownPoint(a));
    }
    let ctx = curve.ctx();
    let mut out: BTreeMap<(usize, i64), F> = BTreeMap::new();
    let Some(lowest) = q.valuation() else {
        return Ok(out);
    };
    // ζ^k κ Q has a residue only for k ≤ −lowest.
    let kmax = (-lowest).max(-1);
    let jmax = ((kmax - lowest) / 2 + 1).max(0) as usize;
    let kappa = recursion::kappa(curve, a, jmax)?;
    let mut k = 0;
    while k <= kmax {
        let mut c = F::zero(ctx);
        let mut j = 0usize;
        loop {
            let e = -k - 2 * j as i64;
            if e < lowest {
                break;
            }
            let v = q.coeff(e)?;
            if !v.is_zero() {
                let kap = kappa.c.get(j).ok_or(EngineError::Truncation {
                    g: 0,
                    n: 0,
                    term: TermGroup::Kernel,
                    needed: 2 * j as i64 - 1,
                    known: 2 * kappa.known as i64 - 1,
                })?;
                c.mul_add_assign(kap, &v);
            }
            j += 1;
        }
        if !c.is_zero() {
            *out.entry((a, -k - 2)).or_insert_with(|| F::zero(ctx)) += &c;
            let inv = F::from_ratio(ctx, 1, k + 1);
            for b in 0..curve.num_points() {
                for e in 0..=regular_ceiling {
                    let beta = curve.beta(b, a, e, k as usize).map_err(CurveError::from)?;
                    if !beta.is_zero() {
                        let v = beta * &c * &inv;
                        *out.entry((b, e as i64)).or_insert_with(|| F::zero(ctx)) += &v;
                    }
                }
            }
        }
        k += 2;
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}
