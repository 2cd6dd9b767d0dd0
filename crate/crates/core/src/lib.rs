//! Exact arithmetic for generalized Artin-Schreier curves
//! `y^{p^u} - y = f(x)` over `F_{p^s}`: point counts, L-polynomials,
//! Newton polygons and first slopes, together with the digit-sum
//! combinatorics and power-series valuations that bound those slopes.

pub mod arith;
pub mod bounds;
pub mod curve;
mod curve_parse;
pub mod error;
pub mod field;
pub mod newton;
pub mod series;
pub mod suite;
pub mod tiling;
pub mod verify;

pub use curve::{CurveSpec, PointCountSeries};
pub use curve_parse::CurveJson;
pub use error::{Error, Result};
pub use newton::{LPolynomial, NewtonPolygon, Rational};
