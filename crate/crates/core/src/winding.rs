//! Winding numbers of intervals in the lifted projective line and of
//! closed projective curves.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cover::{self, CoverClass, CoverElement};
use crate::error::{Error, Result};
use crate::sl2::{self, EigenAngles, Mat2, Sign};
use crate::Tolerances;

/// A non-negative half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "f64", try_from = "f64")]
pub struct HalfInt(u64);

impl HalfInt {
    pub fn integer(n: u64) -> Self {
        HalfInt(2 * n)
    }

    /// `n + ½`.
    pub fn half(n: u64) -> Self {
        HalfInt(2 * n + 1)
    }

    pub fn twice(self) -> u64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl From<HalfInt> for f64 {
    fn from(h: HalfInt) -> f64 {
        h.value()
    }
}

impl TryFrom<f64> for HalfInt {
    type Error = Error;

    fn try_from(x: f64) -> Result<Self> {
        let t = 2.0 * x;
        if t < 0.0 || t.fract() != 0.0 || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("{x} is not a half-integer")));
        }
        Ok(HalfInt(t as u64))
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.0 / 2, self.is_integer()) {
            (n, true) => write!(f, "{n}"),
            (0, false) => f.write_str("½"),
            (n, false) => write!(f, "{n}½"),
        }
    }
}

/// Winding number of a curve's universal cover: finite only for the affine
/// curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExtWinding {
    Finite(HalfInt),
    #[serde(with = "infinity")]
    Infinite,
}

mod infinity {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("infinity")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let s = String::deserialize(d)?;
        if s == "infinity" {
            Ok(())
        } else {
            Err(serde::de::Error::custom("expected \"infinity\""))
        }
    }
}

impl fmt::Display for ExtWinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtWinding::Finite(w) => w.fmt(f),
            ExtWinding::Infinite => f.write_str("∞"),
        }
    }
}

/// An open interval `(a, b)` of the line; endpoints may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_nan() || b.is_nan() || !(a < b) {
            return Err(Error::DegenerateInterval { a, b });
        }
        Ok(Interval { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn is_bounded(&self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", content = "winding")]
pub enum OpenCurveClass {
    FullLine,
    LeftHalfLine,
    RightHalfLine,
    /// Either half-line once orientation is forgotten.
    HalfLine,
    Bounded(HalfInt),
}

pub fn winding_of_interval(u: &Interval) -> Result<HalfInt> {
    winding_of_interval_with(u, &Tolerances::default())
}

/// `k` when the length is `kπ` within `tol.wind`, otherwise `k + ½` for
/// `kπ < b - a < (k+1)π`.
pub fn winding_of_interval_with(u: &Interval, tol: &Tolerances) -> Result<HalfInt> {
    if !u.is_bounded() {
        return Err(Error::Unbounded);
    }
    let len = u.length();
    if len < tol.wind {
        return Err(Error::DegenerateInterval { a: u.a, b: u.b });
    }
    let k = (len / PI).round();
    if k >= 1.0 && (len - k * PI).abs() < tol.wind {
        return Ok(HalfInt::integer(k as u64));
    }
    Ok(HalfInt::half((len / PI).floor() as u64))
}

pub fn classify_open(u: &Interval, oriented: bool) -> Result<OpenCurveClass> {
    classify_open_with(u, oriented, &Tolerances::default())
}

pub fn classify_open_with(u: &Interval, oriented: bool, tol: &Tolerances) -> Result<OpenCurveClass> {
    let class = match (u.a.is_finite(), u.b.is_finite()) {
        (false, false) => OpenCurveClass::FullLine,
        (false, true) if oriented => OpenCurveClass::LeftHalfLine,
        (true, false) if oriented => OpenCurveClass::RightHalfLine,
        (true, true) => OpenCurveClass::Bounded(winding_of_interval_with(u, tol)?),
        _ => OpenCurveClass::HalfLine,
    };
    Ok(class)
}

pub fn interval_mapper(u: &Interval, v: &Interval) -> Result<CoverElement> {
    interval_mapper_with(u, v, &Tolerances::default())
}

/// An element carrying `u` onto `v`, which exists exactly when the
/// windings agree.
///
/// Both intervals are translated to start at 0; for half-integer winding
/// the canonical lift of `P(cot p' - cot p)` fixes 0 and moves `p` to `p'`.
pub fn interval_mapper_with(u: &Interval, v: &Interval, tol: &Tolerances) -> Result<CoverElement> {
    let wu = winding_of_interval_with(u, tol)?;
    let wv = winding_of_interval_with(v, tol)?;
    if wu != wv {
        return Err(Error::WindingMismatch {
            left: wu.to_string(),
            right: wv.to_string(),
        });
    }
    let shift = CoverElement::translation(v.a - u.a);
    if wu.is_integer() {
        return Ok(shift);
    }
    let (p, q) = (u.length(), v.length());
    let x = p.cos() / p.sin();
    let y = q.cos() / q.sin();
    let inner = cover::canonical_lift_with(&Mat2::parabolic(y - x), tol)?;
    CoverElement::translation(v.a)
        .compose(&inner)?
        .compose(&CoverElement::translation(-u.a))
}

/// Winding of the fundamental domain `[a, Ã(a))` of a positive element.
pub fn fundamental_domain_winding(e: &CoverElement, a: f64) -> Result<HalfInt> {
    let class = cover::classify_cover(e)?;
    if !cover::is_positive(&class) {
        return Err(Error::NotPositive(class.to_string()));
    }
    let b = e.evaluate(a);
    if !(b > a) {
        return Err(Error::NotFundamentalDomain { a, b });
    }
    winding_of_interval(&Interval::new(a, b)?)
}

fn require_positive(class: &CoverClass) -> Result<()> {
    if cover::is_positive(class) {
        Ok(())
    } else {
        Err(Error::NotPositive(class.to_string()))
    }
}

/// `W(C)` for the closed curve whose holonomy generator lies in `class`.
pub fn curve_winding(class: &CoverClass) -> Result<HalfInt> {
    require_positive(class)?;
    Ok(match *class {
        CoverClass::EllAlpha { alpha } => HalfInt::half((alpha / PI).floor() as u64),
        CoverClass::CentralK { k } => HalfInt::integer(k as u64),
        CoverClass::ParaK { k: 0, .. } | CoverClass::HypK { k: 0, .. } => HalfInt::half(0),
        CoverClass::ParaK { k, .. } | CoverClass::HypK { k, .. } => HalfInt::integer(k as u64),
    })
}

/// `W(C̃)`: the winding of the developing image.
pub fn cover_winding(class: &CoverClass) -> Result<ExtWinding> {
    require_positive(class)?;
    Ok(match *class {
        CoverClass::ParaK { k: 0, .. } => ExtWinding::Finite(HalfInt::integer(1)),
        CoverClass::HypK { k: 0, .. } => ExtWinding::Finite(HalfInt::half(0)),
        _ => ExtWinding::Infinite,
    })
}

/// Every winding attained by a fundamental domain `[a, Ã(a))`, sorted.
pub fn fundamental_domain_windings(class: &CoverClass) -> Result<Vec<HalfInt>> {
    require_positive(class)?;
    Ok(match *class {
        CoverClass::EllAlpha { alpha } => vec![HalfInt::half((alpha / PI).floor() as u64)],
        CoverClass::CentralK { k } => vec![HalfInt::integer(k as u64)],
        CoverClass::ParaK { k: 0, .. } | CoverClass::HypK { k: 0, .. } => vec![HalfInt::half(0)],
        CoverClass::ParaK { k, parab_sign: Sign::Plus } => {
            let n = k as u64;
            vec![HalfInt::half(n - 1), HalfInt::integer(n)]
        }
        CoverClass::ParaK { k, parab_sign: Sign::Minus } => {
            let n = k as u64;
            vec![HalfInt::integer(n), HalfInt::half(n)]
        }
        CoverClass::HypK { k, .. } => {
            let n = k as u64;
            vec![HalfInt::half(n - 1), HalfInt::integer(n), HalfInt::half(n)]
        }
    })
}

/// The interval between consecutive fixed points on which `Ã(x) > x`,
/// normalised so that `a ∈ [0, π)`.
pub fn fixed_interval(e: &CoverElement) -> Result<Interval> {
    let class = cover::classify_cover(e)?;
    match class {
        CoverClass::ParaK { k: 0, parab_sign: Sign::Minus } | CoverClass::HypK { k: 0, .. } => {}
        CoverClass::ParaK { k: 0, .. } => return Err(Error::NotPositive(class.to_string())),
        _ => return Err(Error::NoFixedPoints),
    }
    let fixed = match sl2::eigen_angles(e.matrix())? {
        EigenAngles::Two(t) => t.to_vec(),
        EigenAngles::One(t) => vec![t],
        EigenAngles::Degenerate => return Err(Error::NoFixedPoints),
    };
    let mut lattice: Vec<f64> = fixed.clone();
    lattice.extend(fixed.iter().map(|t| t + PI));
    lattice.sort_by(f64::total_cmp);
    for w in lattice.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        if e.evaluate(mid) > mid && w[0] < PI {
            return Interval::new(w[0], w[1]);
        }
    }
    Err(Error::NoFixedPoints)
}
