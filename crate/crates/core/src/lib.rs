//! Projective structures on curves, computed from periodic Hill potentials
//! or directly from group data.
//!
//! The pipeline runs from a 1-periodic potential `F` through the monodromy of
//! `x'' + F x = 0` to an element of the universal cover of `SL(2,R)`, whose
//! conjugacy class determines the projective curve up to isomorphism.
//!
//! - [`sl2`]: matrices, conjugacy classes, explicit conjugators.
//! - [`cover`]: lifted circle actions, canonical lifts, classes of the cover.
//! - [`winding`]: winding numbers of intervals and closed curves.
//! - [`hill`]: monodromy integration, developing maps, Schwarzian calculus.
//! - [`report`]: the geometric profile of a closed curve.

pub mod cover;
pub mod error;
pub mod hill;
pub mod ode;
pub mod report;
pub mod sl2;
pub mod winding;

pub use cover::{CoverClass, CoverElement};
pub use error::{Error, Result};
pub use hill::{MonodromyResult, Potential};
pub use report::CurveReport;
pub use sl2::{Mat2, Sign, Sl2Class};
pub use winding::{HalfInt, Interval, OpenCurveClass};

use serde::{Deserialize, Serialize};

/// Numerical bands used wherever an exact identity has to be decided in
/// floating point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// `|det - 1|` accepted for an `SL(2,R)` element.
    pub det: f64,
    /// Band around `|tr| = 2` handed to the secondary parabolic test.
    pub trace: f64,
    /// Frobenius residual accepted for a conjugacy witness.
    pub conj: f64,
    /// Mismatch accepted between a cover element's anchor and its matrix.
    pub anchor: f64,
    /// Band for recognising interval lengths that are multiples of π.
    pub wind: f64,
    /// Distance to a class boundary below which results carry a warning.
    pub boundary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            det: 1e-9,
            trace: 1e-9,
            conj: 1e-8,
            anchor: 1e-9,
            wind: 1e-9,
            boundary: 1e-6,
        }
    }
}
