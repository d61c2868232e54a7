#![allow(dead_code)]

use hillproj_core::cover::central;
use hillproj_core::{CoverElement, Mat2};
use proptest::prelude::*;

/// `SL(2,R)` matrices with entries of moderate size, built from `(a, b, c)`
/// with `|a|` bounded away from zero.
pub fn matrix() -> impl Strategy<Value = Mat2> {
    (0.25f64..3.0, prop::bool::ANY, -3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, neg, b, c)| {
        let a = if neg { -a } else { a };
        Mat2::new(a, b, c, (1.0 + b * c) / a).unwrap()
    })
}

/// Lifts of random matrices shifted by a central element.
pub fn cover_element() -> impl Strategy<Value = CoverElement> {
    (matrix(), -3i64..=3).prop_map(|(m, k)| CoverElement::lift_near(m, 0.0).compose(&central(k)).unwrap())
}

/// Distance of `m` from the parabolic and central strata.
pub fn trace_margin(m: &Mat2) -> f64 {
    (m.trace().abs() - 2.0).abs()
}
