#![no_std]
#![doc = include_str!("../README.md")]

extern crate alloc;

pub mod analysis;
pub mod bounds;
pub mod curve;
pub mod engine;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod scalar;
pub mod series;

pub use curve::{CurveError, SpectralCurveLocal};
pub use scalar::{Exact, Float, FloatCtx, ParseScalarError, Scalar, ScalarMode};
pub use series::{LaurentSeries, SeriesError, VarTag};
