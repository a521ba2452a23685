//! Curve-spec files: JSON text describing a local spectral curve.
//!
//! ```json
//! {
//!   "name": "example",
//!   "mode": "exact",
//!   "R": "1/2",
//!   "points": [
//!     { "id": "a", "x": "0", "y": ["0", "1"], "B_self": [[0, 0, "1/3"]] }
//!   ],
//!   "cross_B": []
//! }
//! ```
//!
//! Scalars are `"p/q"` or decimal strings, optionally complex (`"1/2-3i"`).
//! A point may carry `"trunc"`, the highest known index of its data; a
//! `cross_B` entry may carry its own.

use std::fmt::Display;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use toprec_core::curve::{BRegularPart, RamPoint};
use toprec_core::scalar::parse_scalar;
use toprec_core::{CurveError, ParseScalarError, Scalar, ScalarMode, SpectralCurveLocal};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(rename = "R")]
    pub radius: String,
    pub points: Vec<PointSpec>,
    #[serde(rename = "cross_B", default)]
    pub cross_b: Vec<CrossSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub id: String,
    pub x: String,
    pub y: Vec<String>,
    #[serde(rename = "B_self", default)]
    pub b_self: Vec<(usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossSpec {
    pub pair: (String, String),
    pub coeffs: Vec<(usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<usize>,
}

/// 1-based position in the spec text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("{pos}: {message}")]
    Syntax { pos: Position, message: String },
    #[error("{}{path}: {source}", at(.pos))]
    Scalar { path: String, pos: Option<Position>, source: ParseScalarError },
    #[error("{}mode: {source}", at(.pos))]
    Mode { pos: Option<Position>, source: ParseScalarError },
    #[error("{}{path}: unknown point id `{id}`", at(.pos))]
    UnknownId { path: String, id: String, pos: Option<Position> },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

fn at(pos: &Option<Position>) -> String {
    pos.map(|p| format!("{p}: ")).unwrap_or_default()
}

/// Position of the first occurrence of `"needle"` in `text`.
fn locate(text: &str, needle: &str) -> Option<Position> {
    let quoted = format!("\"{needle}\"");
    let offset = text.find(&quoted)?;
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Some(Position { line, column })
}

impl CurveSpec {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        serde_json::from_str(text).map_err(|e| SpecError::Syntax { pos: Position { line: e.line(), column: e.column() }, message: e.to_string() })
    }

    /// Canonical text: two-space indentation, fields in declaration order.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("spec serializes");
        s.push('\n');
        s
    }

    pub fn mode(&self, text: &str) -> Result<Option<ScalarMode>, SpecError> {
        self.mode.as_deref().map(|m| m.parse().map_err(|source| SpecError::Mode { pos: locate(text, m), source })).transpose()
    }

    /// Builds and validates the curve in the scalar field of `ctx`. `text`
    /// is the source the spec came from, used to place diagnostics.
    pub fn to_curve<F: Scalar>(&self, ctx: &F::Ctx, text: &str) -> Result<SpectralCurveLocal<F>, SpecError> {
        let scalar = |path: String, lit: &str| -> Result<F, SpecError> {
            parse_scalar(ctx, lit).map_err(|source| SpecError::Scalar { pos: locate(text, lit), path, source })
        };
        let mut points = Vec::with_capacity(self.points.len());
        let mut parts = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            let x_value = scalar(format!("points[{i}].x"), &p.x)?;
            let y_coeffs = p.y.iter().enumerate().map(|(k, s)| scalar(format!("points[{i}].y[{k}]"), s)).collect::<Result<Vec<F>, _>>()?;
            let entries = p
                .b_self
                .iter()
                .enumerate()
                .map(|(j, (k, l, s))| Ok((*k, *l, scalar(format!("points[{i}].B_self[{j}]"), s)?)))
                .collect::<Result<Vec<_>, SpecError>>()?;
            parts.push(BRegularPart::from_sparse(ctx, (i, i), &entries, p.trunc));
            points.push(RamPoint { id: p.id.clone(), x_value, y_coeffs, trunc: p.trunc });
        }
        let index = |path: String, id: &str| {
            self.points.iter().position(|p| p.id == id).ok_or_else(|| SpecError::UnknownId { pos: locate(text, id), path, id: id.to_string() })
        };
        let default_trunc = min_trunc(self.points.iter().map(|p| p.trunc));
        for (i, c) in self.cross_b.iter().enumerate() {
            let a = index(format!("cross_B[{i}].pair[0]"), &c.pair.0)?;
            let b = index(format!("cross_B[{i}].pair[1]"), &c.pair.1)?;
            let entries = c
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, (k, l, s))| Ok((*k, *l, scalar(format!("cross_B[{i}].coeffs[{j}]"), s)?)))
                .collect::<Result<Vec<_>, SpecError>>()?;
            parts.push(BRegularPart::from_sparse(ctx, (a, b), &entries, c.trunc.or(default_trunc)));
        }
        let radius = scalar("R".into(), &self.radius)?;
        let name = self.name.clone().unwrap_or_else(|| "spec".into());
        Ok(SpectralCurveLocal::new(ctx, name, points, parts, radius)?.validated()?)
    }

    /// Canonical spec of `curve`: nonzero coefficients only, self parts in
    /// full, one cross entry per unordered pair.
    pub fn from_curve<F: Scalar + Display>(curve: &SpectralCurveLocal<F>) -> Self {
        let pts = curve.points();
        let sparse = |part: &BRegularPart<F>| part.sparse().into_iter().map(|(k, l, v)| (k, l, v.to_string())).collect::<Vec<_>>();
        let points = pts
            .iter()
            .enumerate()
            .map(|(i, p)| PointSpec {
                id: p.id.clone(),
                x: p.x_value.to_string(),
                y: p.y_coeffs.iter().map(ToString::to_string).collect(),
                b_self: sparse(curve.b_part(i, i)),
                trunc: p.trunc,
            })
            .collect();
        let default_trunc = min_trunc(pts.iter().map(|p| p.trunc));
        let cross_b = curve
            .b_parts()
            .filter(|part| part.pair.0 != part.pair.1)
            .filter(|part| !part.sparse().is_empty() || part.trunc != default_trunc)
            .map(|part| CrossSpec {
                pair: (pts[part.pair.0].id.clone(), pts[part.pair.1].id.clone()),
                coeffs: sparse(part),
                trunc: if part.trunc == default_trunc { None } else { part.trunc },
            })
            .collect();
        CurveSpec {
            name: Some(curve.name().to_string()),
            mode: Some(F::mode(curve.ctx()).to_string()),
            radius: curve.radius().to_string(),
            points,
            cross_b,
        }
    }
}

/// Smallest truncation order, `None` when every entry is exact.
fn min_trunc(truncs: impl Iterator<Item = Option<usize>>) -> Option<usize> {
    truncs.flatten().min()
}

/// Parses and validates spec text in the field of `ctx`.
pub fn parse_curve_spec<F: Scalar>(ctx: &F::Ctx, text: &str) -> Result<SpectralCurveLocal<F>, SpecError> {
    CurveSpec::from_json(text)?.to_curve(ctx, text)
}

/// Canonical spec text of `curve`.
pub fn serialize_curve<F: Scalar + Display>(curve: &SpectralCurveLocal<F>) -> String {
    CurveSpec::from_curve(curve).to_json()
}
