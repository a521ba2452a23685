//! Local spectral curve data.
//!
//! A curve is a list of simple ramification points. Near each point `a` the
//! chart is `x = x(a) + ζ²`, `y = Σ y_k ζ^k`, and the bidifferential reads
//!
//! ```text
//! B(p, q) / (dζ_a(p) dζ_b(q)) = [a = b] / (ζ_a(p) − ζ_b(q))² + Σ β^{ab}_{kl} ζ_a(p)^k ζ_b(q)^l
//! ```
//!
//! Only this local data is ever stored; global curves are lowered on
//! construction.

mod builtin;
mod rho;
mod validate;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::scalar::Scalar;

pub use builtin::{builtin, builtin_airy, builtin_cubic, builtin_cubic_linear, BUILTIN_NAMES};
pub use rho::{rho_series, RhoChart};
pub use validate::Violation;

/// Which piece of curve data a truncated read touched.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveData {
    Y { point: usize },
    B { a: usize, b: usize },
    Rho { point: usize },
}

impl fmt::Display for CurveData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveData::Y { point } => write!(f, "y at point #{point}"),
            CurveData::B { a, b } => write!(f, "B regular part for pair (#{a}, #{b})"),
            CurveData::Rho { point } => write!(f, "ρ at point #{point}"),
        }
    }
}

/// A read beyond the truncation order of the curve data.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{data}: index {index} exceeds truncation order {trunc}")]
pub struct TruncationExceeded {
    pub data: CurveData,
    pub index: usize,
    pub trunc: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("curve has no ramification points")]
    Empty,
    #[error("duplicate point id `{0}`")]
    DuplicateId(String),
    #[error("unknown point id `{0}`")]
    UnknownId(String),
    #[error("B data for pair ({0}, {1}) given twice")]
    DuplicatePair(String, String),
    #[error("asymmetric B data for pair ({0}, {1})")]
    AsymmetricB(String, String),
    #[error("invalid curve: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("square root of {0} is not representable in exact mode")]
    IrrationalRoot(String),
    #[error(transparent)]
    Truncation(#[from] TruncationExceeded),
}

fn join_violations(v: &[Violation]) -> String {
    let mut out = String::new();
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        out.push_str(&alloc::format!("{x}"));
    }
    out
}

/// A simple ramification point with its local `y` expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct RamPoint<F: Scalar> {
    pub id: String,
    pub x_value: F,
    /// `y(ζ) = Σ y_coeffs[k] ζ^k`.
    pub y_coeffs: Vec<F>,
    /// Highest known index of `y_coeffs`; `None` when `y` is exactly the
    /// given polynomial.
    pub trunc: Option<usize>,
}

/// Regular part of `B` for an ordered pair of points, stored densely as
/// `coeffs[k][l]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BRegularPart<F: Scalar> {
    pub pair: (usize, usize),
    pub coeffs: Vec<Vec<F>>,
    /// Highest known index in either variable; `None` when exact.
    pub trunc: Option<usize>,
}

impl<F: Scalar> BRegularPart<F> {
    pub fn zero(pair: (usize, usize), trunc: Option<usize>) -> Self {
        BRegularPart { pair, coeffs: Vec::new(), trunc }
    }

    /// Builds the dense table from sparse `(k, l, value)` triples; repeated
    /// entries add up.
    pub fn from_sparse(ctx: &F::Ctx, pair: (usize, usize), entries: &[(usize, usize, F)], trunc: Option<usize>) -> Self {
        let rows = entries.iter().map(|e| e.0 + 1).max().unwrap_or(0);
        let cols = entries.iter().map(|e| e.1 + 1).max().unwrap_or(0);
        let mut coeffs = vec![vec![F::zero(ctx); cols]; rows];
        for (k, l, v) in entries {
            coeffs[*k][*l] += v;
        }
        BRegularPart { pair, coeffs, trunc }
    }

    fn stored(&self, k: usize, l: usize) -> Option<&F> {
        self.coeffs.get(k).and_then(|row| row.get(l))
    }

    /// Swaps the roles of the two variables.
    pub fn transpose(&self, ctx: &F::Ctx) -> Self {
        let rows = self.coeffs.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![vec![F::zero(ctx); self.coeffs.len()]; rows];
        for (k, row) in self.coeffs.iter().enumerate() {
            for (l, v) in row.iter().enumerate() {
                out[l][k] = v.clone();
            }
        }
        BRegularPart { pair: (self.pair.1, self.pair.0), coeffs: out, trunc: self.trunc }
    }

    /// Nonzero entries as `(k, l, value)`, row-major.
    pub fn sparse(&self) -> Vec<(usize, usize, &F)> {
        let mut out = Vec::new();
        for (k, row) in self.coeffs.iter().enumerate() {
            for (l, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    out.push((k, l, v));
                }
            }
        }
        out
    }
}

/// The local spectral curve: ramification points, `B` data and disc radius.
#[derive(Clone, Debug)]
pub struct SpectralCurveLocal<F: Scalar> {
    name: String,
    points: Vec<RamPoint<F>>,
    /// `b[a][b]` is the regular part for the ordered pair `(a, b)`.
    b: Vec<Vec<BRegularPart<F>>>,
    radius: F,
    ctx: F::Ctx,
}

impl<F: Scalar> SpectralCurveLocal<F> {
    /// Assembles a curve, checking the structural invariants: unique ids and
    /// symmetric `B` data. Pairs without data have a zero regular part.
    /// Numeric hypotheses are checked separately by [`Self::validate`].
    pub fn new(
        ctx: &F::Ctx,
        name: impl Into<String>,
        points: Vec<RamPoint<F>>,
        b_parts: Vec<BRegularPart<F>>,
        radius: F,
    ) -> Result<Self, CurveError> {
        if points.is_empty() {
            return Err(CurveError::Empty);
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].iter().any(|q| q.id == p.id) {
                return Err(CurveError::DuplicateId(p.id.clone()));
            }
        }
        let n = points.len();
        let mut slots: Vec<Vec<Option<BRegularPart<F>>>> = vec![vec![None; n]; n];
        let mut given = vec![vec![false; n]; n];
        for part in b_parts {
            let (a, b) = part.pair;
            if a >= n || b >= n {
                return Err(CurveError::UnknownId(alloc::format!("#{}", a.max(b))));
            }
            let names = || (points[a].id.clone(), points[b].id.clone());
            if given[a][b] {
                let (x, y) = names();
                return Err(CurveError::DuplicatePair(x, y));
            }
            given[a][b] = true;
            if a == b {
                if !same_entries(&part, &part.transpose(ctx)) {
                    let (x, y) = names();
                    return Err(CurveError::AsymmetricB(x, y));
                }
                slots[a][a] = Some(part);
                continue;
            }
            if given[b][a] {
                // Both orientations supplied: they must describe the same B.
                let existing = slots[a][b].as_ref().expect("mirrored on insertion");
                if existing.trunc != part.trunc || !same_entries(existing, &part) {
                    let (x, y) = names();
                    return Err(CurveError::AsymmetricB(x, y));
                }
                continue;
            }
            slots[b][a] = Some(part.transpose(ctx));
            slots[a][b] = Some(part);
        }
        let default_trunc = points.iter().map(|p| p.trunc).fold(None, min_trunc);
        let b = slots
            .into_iter()
            .enumerate()
            .map(|(a, row)| {
                row.into_iter().enumerate().map(|(bb, part)| part.unwrap_or_else(|| BRegularPart::zero((a, bb), default_trunc))).collect()
            })
            .collect();
        Ok(SpectralCurveLocal { name: name.into(), points, b, radius, ctx: ctx.clone() })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn points(&self) -> &[RamPoint<F>] {
        &self.points
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn point_index(&self, id: &str) -> Option<usize> {
        self.points.iter().position(|p| p.id == id)
    }

    pub fn radius(&self) -> &F {
        &self.radius
    }

    /// Regular part of `B` for the ordered pair `(a, b)`.
    pub fn b_part(&self, a: usize, b: usize) -> &BRegularPart<F> {
        &self.b[a][b]
    }

    /// One representative per unordered pair, `a ≤ b`.
    pub fn b_parts(&self) -> impl Iterator<Item = &BRegularPart<F>> + '_ {
        (0..self.points.len()).flat_map(move |a| (a..self.points.len()).map(move |b| &self.b[a][b]))
    }

    /// `y_k` at point `a`.
    pub fn y(&self, a: usize, k: usize) -> Result<F, TruncationExceeded> {
        let p = &self.points[a];
        if let Some(t) = p.trunc {
            if k > t {
                return Err(TruncationExceeded { data: CurveData::Y { point: a }, index: k, trunc: t });
            }
        }
        Ok(p.y_coeffs.get(k).cloned().unwrap_or_else(|| F::zero(&self.ctx)))
    }

    /// `β^{ab}_{kl}`.
    pub fn beta(&self, a: usize, b: usize, k: usize, l: usize) -> Result<F, TruncationExceeded> {
        let part = &self.b[a][b];
        if let Some(t) = part.trunc {
            if k.max(l) > t {
                return Err(TruncationExceeded { data: CurveData::B { a, b }, index: k.max(l), trunc: t });
            }
        }
        Ok(part.stored(k, l).cloned().unwrap_or_else(|| F::zero(&self.ctx)))
    }

    /// Smallest truncation order over all data, `None` when everything is
    /// exact.
    pub fn trunc_order(&self) -> Option<usize> {
        let y = self.points.iter().map(|p| p.trunc).fold(None, min_trunc);
        self.b.iter().flatten().map(|p| p.trunc).fold(y, min_trunc)
    }

    /// Checks the numeric hypotheses; an empty list means the curve is valid.
    pub fn validate(&self) -> Vec<Violation> {
        validate::validate(self)
    }

    /// Consumes the curve, returning it only if [`Self::validate`] is clean.
    pub fn validated(self) -> Result<Self, CurveError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(CurveError::Invalid(v))
        }
    }

    /// Replaces the disc radius.
    pub fn with_radius(mut self, radius: F) -> Self {
        self.radius = radius;
        self
    }

    /// Converts all data into another scalar field.
    pub fn map_scalars<G: Scalar>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> SpectralCurveLocal<G> {
        let points = self
            .points
            .iter()
            .map(|p| RamPoint { id: p.id.clone(), x_value: f(&p.x_value), y_coeffs: p.y_coeffs.iter().map(&f).collect(), trunc: p.trunc })
            .collect();
        let b = self
            .b
            .iter()
            .map(|row| {
                row.iter()
                    .map(|part| BRegularPart {
                        pair: part.pair,
                        coeffs: part.coeffs.iter().map(|r| r.iter().map(&f).collect()).collect(),
                        trunc: part.trunc,
                    })
                    .collect()
            })
            .collect();
        SpectralCurveLocal { name: self.name.clone(), points, b, radius: f(&self.radius), ctx: ctx.clone() }
    }

    /// Double-precision copy used by sampling.
    pub fn to_c64(&self) -> SpectralCurveLocal<Complex64> {
        self.map_scalars(&(), |v| v.to_c64())
    }
}

fn min_trunc(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn entry<F: Scalar>(part: &BRegularPart<F>, k: usize, l: usize) -> Option<&F> {
    part.stored(k, l).filter(|v| !v.is_zero())
}

fn same_entries<F: Scalar>(x: &BRegularPart<F>, y: &BRegularPart<F>) -> bool {
    let rows = x.coeffs.len().max(y.coeffs.len());
    let cols = x.coeffs.iter().chain(y.coeffs.iter()).map(Vec::len).max().unwrap_or(0);
    (0..rows).all(|k| (0..cols).all(|l| entry(x, k, l) == entry(y, k, l)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use alloc::string::ToString;

    fn point(id: &str, x: i64) -> RamPoint<Exact> {
        RamPoint { id: id.to_string(), x_value: Exact::int(x), y_coeffs: vec![Exact::int(0), Exact::int(1)], trunc: None }
    }

    #[test]
    fn cross_data_is_mirrored() {
        let part = BRegularPart::from_sparse(&(), (0, 1), &[(2, 0, Exact::ratio(1, 3))], Some(4));
        let c = SpectralCurveLocal::new(&(), "t", vec![point("a", 0), point("b", 1)], vec![part], Exact::ratio(1, 4)).unwrap();
        assert_eq!(c.beta(0, 1, 2, 0).unwrap(), Exact::ratio(1, 3));
        assert_eq!(c.beta(1, 0, 0, 2).unwrap(), Exact::ratio(1, 3));
        assert!(c.beta(1, 0, 2, 0).unwrap().is_zero());
        assert!(matches!(c.beta(0, 1, 5, 0), Err(TruncationExceeded { index: 5, trunc: 4, .. })));
    }

    #[test]
    fn asymmetric_self_data_rejected() {
        let part = BRegularPart::from_sparse(&(), (0, 0), &[(1, 0, Exact::int(1))], None);
        let err = SpectralCurveLocal::new(&(), "t", vec![point("a", 0)], vec![part], Exact::ratio(1, 2)).unwrap_err();
        assert!(matches!(err, CurveError::AsymmetricB(..)));
        assert_eq!(err.to_string(), "asymmetric B data for pair (a, a)");
    }

    #[test]
    fn inconsistent_orientations_rejected() {
        let ab = BRegularPart::from_sparse(&(), (0, 1), &[(1, 0, Exact::int(1))], None);
        let ba = BRegularPart::from_sparse(&(), (1, 0), &[(1, 0, Exact::int(1))], None);
        let err = SpectralCurveLocal::new(&(), "t", vec![point("a", 0), point("b", 1)], vec![ab.clone(), ba], Exact::ratio(1, 4)).unwrap_err();
        assert!(matches!(err, CurveError::AsymmetricB(..)));
        let ba_ok = ab.transpose(&());
        assert!(SpectralCurveLocal::new(&(), "t", vec![point("a", 0), point("b", 1)], vec![ab, ba_ok], Exact::ratio(1, 4)).is_ok());
    }

    #[test]
    fn duplicate_ids_rejected() {
        let err = SpectralCurveLocal::new(&(), "t", vec![point("a", 0), point("a", 1)], vec![], Exact::ratio(1, 4)).unwrap_err();
        assert_eq!(err, CurveError::DuplicateId("a".to_string()));
    }
}
