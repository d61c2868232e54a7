//! The universal cover of `SL(2,R)` acting on the line.
//!
//! An element is stored as its `SL(2,R)` projection together with the value
//! `t0 = Ã(0)` of the lifted action. The lift satisfies
//! `(cos Ã(x), sin Ã(x)) ∝ A (cos x, sin x)` with a positive factor, is
//! strictly increasing, and commutes with translation by π.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sl2::{self, EigenAngles, Mat2, Sign, Sl2Class};
use crate::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverElement {
    matrix: Mat2,
    t0: f64,
}

/// Principal direction angle of `m · e1`.
fn anchor_angle(m: &Mat2) -> f64 {
    m.c().atan2(m.a())
}

/// Picks the lift of `m`'s anchor angle nearest to `approx`.
fn snap(m: &Mat2, approx: f64) -> f64 {
    let theta = anchor_angle(m);
    theta + TAU * ((approx - theta) / TAU).round()
}

/// Continues the lift of `m` from `Ã(x0) = y0` to `x`.
///
/// Steps of at most π/4 are taken; a step is halved whenever the branch
/// correction against the straight-line prediction exceeds π/2.
fn continue_lift(m: &Mat2, x0: f64, y0: f64, x: f64) -> f64 {
    let r = (x - x0).rem_euclid(PI);
    let q = ((x - x0 - r) / PI).round();
    let mut t = x0;
    let mut v = y0;
    let mut h = FRAC_PI_4;
    let end = x0 + r;
    while t < end {
        let t1 = if end - t <= h { end } else { t + h };
        let (s, c) = t1.sin_cos();
        let w = m.apply([c, s]);
        let theta = w[1].atan2(w[0]);
        let pred = v + (t1 - t);
        let cand = theta + TAU * ((pred - theta) / TAU).round();
        if (cand - pred).abs() > FRAC_PI_2 && t1 - t > 1e-12 {
            h = 0.5 * (t1 - t);
            continue;
        }
        t = t1;
        v = cand;
        h = (2.0 * h).min(FRAC_PI_4);
    }
    v + q * PI
}

impl CoverElement {
    pub fn new(matrix: Mat2, t0: f64) -> Result<Self> {
        Self::with_tolerance(matrix, t0, Tolerances::default().anchor)
    }

    /// Rejects anchors whose direction disagrees with `matrix · e1` by more
    /// than `anchor_tol` (modulo 2π).
    pub fn with_tolerance(matrix: Mat2, t0: f64, anchor_tol: f64) -> Result<Self> {
        if !t0.is_finite() {
            return Err(Error::InvalidElement(format!("anchor {t0} is not finite")));
        }
        let theta = anchor_angle(&matrix);
        let mismatch = (t0 - theta - TAU * ((t0 - theta) / TAU).round()).abs();
        if mismatch > anchor_tol * t0.abs().max(1.0) {
            return Err(Error::InvalidElement(format!(
                "anchor {t0} is {mismatch:e} away from the direction of {matrix}·e1"
            )));
        }
        Ok(CoverElement { matrix, t0 })
    }

    /// The lift of `matrix` whose anchor is the one nearest to `approx`.
    pub fn lift_near(matrix: Mat2, approx: f64) -> Self {
        CoverElement {
            matrix,
            t0: snap(&matrix, approx),
        }
    }

    pub fn identity() -> Self {
        CoverElement {
            matrix: Mat2::IDENTITY,
            t0: 0.0,
        }
    }

    /// `ℓ̃_α(x) = x + α`, lying over the rotation `E_α`.
    pub fn translation(alpha: f64) -> Self {
        CoverElement {
            matrix: Mat2::rotation(alpha),
            t0: alpha,
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.matrix
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        continue_lift(&self.matrix, 0.0, self.t0, x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &CoverElement) -> Result<CoverElement> {
        let matrix = self.matrix.multiply(&other.matrix)?;
        let t0 = snap(&matrix, self.evaluate(other.t0));
        Ok(CoverElement { matrix, t0 })
    }

    pub fn invert(&self) -> CoverElement {
        let matrix = self.matrix.inverse();
        // |Ã(x) - x| < π everywhere, so the preimage of 0 lies within π of -t0.
        let (mut lo, mut hi) = (-self.t0 - PI, -self.t0 + PI);
        while hi - lo > 1e-12 * (1.0 + self.t0.abs()) {
            let mid = 0.5 * (lo + hi);
            if self.evaluate(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        CoverElement {
            matrix,
            t0: snap(&matrix, 0.5 * (lo + hi)),
        }
    }

    /// The orientation-reversed conjugate `x ↦ -Ã(-x)`, lying over `T A T`
    /// with `T = diag(1, -1)`.
    pub fn tau_conjugate(&self) -> CoverElement {
        CoverElement {
            matrix: self.matrix.reflect(),
            t0: -self.t0,
        }
    }

    /// Equality of the lifted actions up to `tol`.
    pub fn approx_eq(&self, other: &CoverElement, tol: f64) -> bool {
        self.matrix.distance(&other.matrix) <= tol * other.matrix.frobenius_norm().max(1.0)
            && (self.t0 - other.t0).abs() <= tol * other.t0.abs().max(1.0)
    }
}

impl fmt::Display for CoverElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, t0 = {})", self.matrix, self.t0)
    }
}

pub fn canonical_lift(m: &Mat2) -> Result<CoverElement> {
    canonical_lift_with(m, &Tolerances::default())
}

/// The lift fixing every preimage of the fixed points of `m` on `RP¹`.
///
/// Its projection is `sign(tr m) · m`: a lift with a fixed point maps the
/// fixed direction to a positive multiple of itself.
pub fn canonical_lift_with(m: &Mat2, tol: &Tolerances) -> Result<CoverElement> {
    let class = sl2::classify_sl2_with(m, tol)?;
    let positive = match class.matrix_sign() {
        Sign::Plus => *m,
        Sign::Minus => m.neg(),
    };
    match class {
        Sl2Class::EllipticProper { .. } => Err(Error::NoCanonicalLift),
        Sl2Class::Central { .. } => Ok(CoverElement::identity()),
        _ => {
            let fixed = sl2::eigen_angles_with(&positive, tol)?.first();
            let t0 = continue_lift(&positive, fixed, fixed, 0.0);
            Ok(CoverElement::lift_near(positive, t0))
        }
    }
}

/// Conjugacy classes of the cover.
///
/// `HypK { k, λ }` is the class of `H̃₀(λ) ℓ̃_{kπ}`, `ParaK { k, ± }` that of
/// `P̃₀^± ℓ̃_{kπ}`, `EllAlpha { α }` that of the translation `ℓ̃_α` with
/// `α ∉ πZ`, and `CentralK { k }` the single element `ℓ̃_{kπ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CoverClass {
    HypK { k: i64, lambda: f64 },
    ParaK { k: i64, parab_sign: Sign },
    EllAlpha { alpha: f64 },
    CentralK { k: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoverKind {
    HypK,
    ParaK,
    EllAlpha,
    CentralK,
}

impl CoverKind {
    pub fn name(self) -> &'static str {
        match self {
            CoverKind::HypK => "HypK",
            CoverKind::ParaK => "ParaK",
            CoverKind::EllAlpha => "EllAlpha",
            CoverKind::CentralK => "CentralK",
        }
    }
}

impl CoverClass {
    pub fn kind(&self) -> CoverKind {
        match self {
            CoverClass::HypK { .. } => CoverKind::HypK,
            CoverClass::ParaK { .. } => CoverKind::ParaK,
            CoverClass::EllAlpha { .. } => CoverKind::EllAlpha,
            CoverClass::CentralK { .. } => CoverKind::CentralK,
        }
    }

    /// The integer index; for elliptic classes the branch `floor(α/π)`.
    pub fn k(&self) -> i64 {
        match *self {
            CoverClass::HypK { k, .. } | CoverClass::ParaK { k, .. } | CoverClass::CentralK { k } => k,
            CoverClass::EllAlpha { alpha } => (alpha / PI).floor() as i64,
        }
    }

    pub fn approx_eq(&self, other: &CoverClass, tol: f64) -> bool {
        match (*self, *other) {
            (CoverClass::HypK { k: k1, lambda: l1 }, CoverClass::HypK { k: k2, lambda: l2 }) => {
                k1 == k2 && (l1 - l2).abs() <= tol
            }
            (
                CoverClass::ParaK { k: k1, parab_sign: s1 },
                CoverClass::ParaK { k: k2, parab_sign: s2 },
            ) => k1 == k2 && s1 == s2,
            (CoverClass::EllAlpha { alpha: a1 }, CoverClass::EllAlpha { alpha: a2 }) => {
                (a1 - a2).abs() <= tol * a2.abs().max(1.0)
            }
            (CoverClass::CentralK { k: k1 }, CoverClass::CentralK { k: k2 }) => k1 == k2,
            _ => false,
        }
    }

    /// The standard representative of the class.
    pub fn representative(&self) -> Result<CoverElement> {
        match *self {
            CoverClass::HypK { k, lambda } => {
                if !(lambda > 0.0 && lambda < 1.0) {
                    return Err(Error::InvalidParameter(format!("λ = {lambda} not in (0,1)")));
                }
                canonical_lift(&Mat2::hyperbolic(lambda)?)?.compose(&central(k))
            }
            CoverClass::ParaK { k, parab_sign } => {
                canonical_lift(&Mat2::parabolic(parab_sign.value()))?.compose(&central(k))
            }
            CoverClass::EllAlpha { alpha } => {
                if (alpha / PI).fract() == 0.0 || !alpha.is_finite() {
                    return Err(Error::InvalidParameter(format!("α = {alpha} lies in πZ")));
                }
                Ok(CoverElement::translation(alpha))
            }
            CoverClass::CentralK { k } => Ok(central(k)),
        }
    }
}

impl fmt::Display for CoverClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverClass::HypK { k, lambda } => write!(f, "Hyp_{k}(λ={lambda})"),
            CoverClass::ParaK { k, parab_sign } => write!(f, "Para_{k}^{parab_sign}"),
            CoverClass::EllAlpha { alpha } => write!(f, "Ell_{alpha}"),
            CoverClass::CentralK { k } => write!(f, "Central_{k}"),
        }
    }
}

/// `ℓ̃_{kπ}` with its exact matrix `(-1)^k I`.
pub fn central(k: i64) -> CoverElement {
    let matrix = if k.rem_euclid(2) == 0 {
        Mat2::IDENTITY
    } else {
        Mat2::IDENTITY.neg()
    };
    CoverElement {
        matrix,
        t0: k as f64 * PI,
    }
}

/// A class lying close to a boundary of its stratum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditioningWarning {
    /// `||tr| - 2|` for a hyperbolic or elliptic element.
    pub margin: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: CoverClass,
    pub warning: Option<ConditioningWarning>,
}

pub fn classify_cover(e: &CoverElement) -> Result<CoverClass> {
    Ok(classify_cover_with(e, &Tolerances::default())?.class)
}

pub fn classify_cover_with(e: &CoverElement, tol: &Tolerances) -> Result<Classification> {
    let m = e.matrix();
    let base = sl2::classify_sl2_with(m, tol)?;
    let margin = (m.trace().abs() - 2.0).abs();
    let class = match base {
        Sl2Class::Central { .. } => {
            let k = (e.t0 / PI).round();
            if (e.t0 - k * PI).abs() > tol.anchor * e.t0.abs().max(1.0) {
                return Err(Error::IllConditioned(format!(
                    "central matrix with anchor {} off πZ",
                    e.t0
                )));
            }
            return Ok(Classification {
                class: CoverClass::CentralK { k: k as i64 },
                warning: None,
            });
        }
        Sl2Class::EllipticProper { .. } => {
            let k = (e.t0 / PI).floor();
            let half = 0.5 * m.trace();
            let u = half.clamp(-1.0, 1.0).acos();
            let alpha = if (k as i64).rem_euclid(2) == 0 {
                k * PI + u
            } else {
                k * PI + (PI - u)
            };
            return Ok(Classification {
                class: CoverClass::EllAlpha { alpha },
                warning: (margin < tol.boundary).then_some(ConditioningWarning { margin }),
            });
        }
        Sl2Class::Hyperbolic { lambda, .. } => {
            let theta = fixed_direction(m, tol)?;
            CoverClass::HypK {
                k: shift_index(e, theta)?,
                lambda,
            }
        }
        Sl2Class::Parabolic { .. } => {
            let theta = fixed_direction(m, tol)?;
            let k = shift_index(e, theta)?;
            let y = theta + FRAC_PI_2;
            let d = e.evaluate(y) - y - k as f64 * PI;
            if d.abs() < 1e-12 {
                return Err(Error::IllConditioned(format!(
                    "parabolic displacement {d:e} at a non-fixed point"
                )));
            }
            // The canonical lift of P⁻ moves points forward, that of P⁺ backward.
            let parab_sign = if d > 0.0 { Sign::Minus } else { Sign::Plus };
            return Ok(Classification {
                class: CoverClass::ParaK { k, parab_sign },
                warning: None,
            });
        }
    };
    Ok(Classification {
        class,
        warning: (margin < tol.boundary).then_some(ConditioningWarning { margin }),
    })
}

fn fixed_direction(m: &Mat2, tol: &Tolerances) -> Result<f64> {
    match sl2::eigen_angles_with(m, tol)? {
        EigenAngles::Two([t, _]) | EigenAngles::One(t) => Ok(t),
        EigenAngles::Degenerate => Ok(0.0),
    }
}

fn shift_index(e: &CoverElement, theta: f64) -> Result<i64> {
    let q = (e.evaluate(theta) - theta) / PI;
    let k = q.round();
    if (q - k).abs() > 1e-6 {
        return Err(Error::IllConditioned(format!(
            "displacement at a fixed direction is {q}π, not an integer multiple of π"
        )));
    }
    Ok(k as i64)
}

/// Membership in the positive semigroup: some point is moved forward.
pub fn is_positive(class: &CoverClass) -> bool {
    match *class {
        CoverClass::HypK { k, .. } => k >= 0,
        CoverClass::EllAlpha { alpha } => alpha > 0.0,
        CoverClass::ParaK { k, parab_sign: Sign::Minus } => k >= 0,
        CoverClass::ParaK { k, parab_sign: Sign::Plus } => k >= 1,
        CoverClass::CentralK { k } => k >= 1,
    }
}

/// The generator of `<Ã>` moving points forward; `Ã` itself when both `Ã`
/// and its inverse qualify.
pub fn positive_generator(e: &CoverElement) -> Result<CoverElement> {
    let class = classify_cover(e)?;
    if class == (CoverClass::CentralK { k: 0 }) {
        return Err(Error::NoGenerator);
    }
    if is_positive(&class) {
        Ok(*e)
    } else {
        Ok(e.invert())
    }
}

pub fn conjugate_cover(a: &CoverElement, b: &CoverElement) -> Result<CoverElement> {
    conjugate_cover_with(a, b, &Tolerances::default())
}

/// A witness `C̃` with `C̃ Ã C̃⁻¹ = B̃`.
pub fn conjugate_cover_with(
    a: &CoverElement,
    b: &CoverElement,
    tol: &Tolerances,
) -> Result<CoverElement> {
    let ca = classify_cover_with(a, tol)?.class;
    let cb = classify_cover_with(b, tol)?.class;
    if !ca.approx_eq(&cb, tol.conj) {
        return Err(Error::NotConjugate(format!("{ca} vs {cb}")));
    }
    let c = sl2::conjugator_with(a.matrix(), b.matrix(), tol)?;
    let witness = CoverElement::lift_near(c, 0.0);
    let image = witness.compose(a)?.compose(&witness.invert())?;
    if !image.approx_eq(b, tol.conj) {
        return Err(Error::IllConditioned(format!(
            "conjugate {image} does not reproduce {b}"
        )));
    }
    Ok(witness)
}

pub fn tau_conjugate(e: &CoverElement) -> CoverElement {
    e.tau_conjugate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn para_minus() -> CoverElement {
        canonical_lift(&Mat2::parabolic(-1.0)).unwrap()
    }

    #[test]
    fn translation_evaluates_as_shift() {
        let l = CoverElement::translation(1.3);
        for x in [-7.0, -0.2, 0.0, 0.9, 4.0, 31.0] {
            assert_abs_diff_eq!(l.evaluate(x), x + 1.3, epsilon = 1e-12);
        }
    }

    #[test]
    fn hyperbolic_canonical_lift_values() {
        let h = canonical_lift(&Mat2::hyperbolic(0.5).unwrap()).unwrap();
        assert_abs_diff_eq!(h.t0(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h.evaluate(FRAC_PI_2), FRAC_PI_2, epsilon = 1e-12);
        // atan(λ⁻² tan x) on (0, π/2)
        assert_abs_diff_eq!(h.evaluate(FRAC_PI_4), 4f64.atan(), epsilon = 1e-12);
        assert_abs_diff_eq!(h.evaluate(FRAC_PI_4), 1.325818, epsilon = 1e-6);
        for k in -3..=3 {
            let x = k as f64 * FRAC_PI_2;
            assert_abs_diff_eq!(h.evaluate(x), x, epsilon = 1e-12);
        }
    }

    #[test]
    fn anchor_must_match_matrix() {
        assert!(CoverElement::new(Mat2::IDENTITY, 0.5).is_err());
        assert!(CoverElement::new(Mat2::IDENTITY, TAU).is_ok());
        // A half turn needs -I.
        assert!(CoverElement::new(Mat2::IDENTITY, PI).is_err());
        assert!(CoverElement::new(Mat2::IDENTITY.neg(), PI).is_ok());
    }

    #[test]
    fn compose_and_invert() {
        let a = CoverElement::translation(0.4);
        let b = CoverElement::translation(2.9);
        let ab = a.compose(&b).unwrap();
        assert!(ab.approx_eq(&CoverElement::translation(3.3), 1e-12));

        let x = canonical_lift(&Mat2::new(2.0, 1.0, 1.0, 1.0).unwrap())
            .unwrap()
            .compose(&CoverElement::translation(5.0))
            .unwrap();
        let id = x.compose(&x.invert()).unwrap();
        assert!(id.approx_eq(&CoverElement::identity(), 1e-10), "{id}");

        let p = para_minus().compose(&central(1)).unwrap();
        assert!(p.matrix().distance(&Mat2::parabolic(-1.0).neg()) < 1e-15);
        assert_abs_diff_eq!(p.t0(), PI, epsilon = 1e-12);
    }

    #[test]
    fn canonical_lift_fixed_lattices() {
        let p = para_minus();
        for k in -4..=4 {
            let x = k as f64 * PI;
            assert_abs_diff_eq!(p.evaluate(x), x, epsilon = 1e-12);
        }
        assert_eq!(canonical_lift(&Mat2::IDENTITY).unwrap(), CoverElement::identity());
        assert_eq!(canonical_lift(&Mat2::rotation(1.0)), Err(Error::NoCanonicalLift));
    }

    #[test]
    fn classify_examples() {
        let c = CoverElement::new(Mat2::IDENTITY, TAU).unwrap();
        assert_eq!(classify_cover(&c).unwrap(), CoverClass::CentralK { k: 2 });

        let p1 = para_minus().compose(&central(1)).unwrap();
        assert_eq!(
            classify_cover(&p1).unwrap(),
            CoverClass::ParaK { k: 1, parab_sign: Sign::Minus }
        );

        let f0 = CoverElement::new(Mat2::new(1.0, 0.0, 1.0, 1.0).unwrap(), FRAC_PI_4).unwrap();
        assert_eq!(
            classify_cover(&f0).unwrap(),
            CoverClass::ParaK { k: 0, parab_sign: Sign::Minus }
        );

        let e = CoverElement::translation(7.5);
        match classify_cover(&e).unwrap() {
            CoverClass::EllAlpha { alpha } => assert_abs_diff_eq!(alpha, 7.5, epsilon = 1e-12),
            other => panic!("{other}"),
        }
        let e = CoverElement::translation(-2.0);
        match classify_cover(&e).unwrap() {
            CoverClass::EllAlpha { alpha } => assert_abs_diff_eq!(alpha, -2.0, epsilon = 1e-12),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn hyperbolic_index_follows_translation() {
        let h = canonical_lift(&Mat2::hyperbolic(0.3).unwrap()).unwrap();
        for k in -3..=3 {
            let e = h.compose(&central(k)).unwrap();
            let c = classify_cover(&e).unwrap();
            assert!(c.approx_eq(&CoverClass::HypK { k, lambda: 0.3 }, 1e-12), "{c}");
        }
    }

    #[test]
    fn positivity() {
        let g = positive_generator(&CoverElement::translation(-2.0)).unwrap();
        assert!(g.approx_eq(&CoverElement::translation(2.0), 1e-10));

        let pp = canonical_lift(&Mat2::parabolic(1.0)).unwrap();
        assert!(!is_positive(&classify_cover(&pp).unwrap()));
        let g = positive_generator(&pp).unwrap();
        assert_eq!(
            classify_cover(&g).unwrap(),
            CoverClass::ParaK { k: 0, parab_sign: Sign::Minus }
        );

        let h = canonical_lift(&Mat2::hyperbolic(0.5).unwrap()).unwrap();
        assert_eq!(positive_generator(&h).unwrap(), h);
        assert!(is_positive(&classify_cover(&h.invert()).unwrap()));

        assert_eq!(positive_generator(&CoverElement::identity()), Err(Error::NoGenerator));
    }

    #[test]
    fn conjugacy_witnesses() {
        let l = CoverElement::translation(1.1);
        let w = conjugate_cover(&l, &l).unwrap();
        let img = w.compose(&l).unwrap().compose(&w.invert()).unwrap();
        assert!(img.approx_eq(&l, 1e-10));

        let h = canonical_lift(&Mat2::hyperbolic(0.4).unwrap()).unwrap();
        let a = h.compose(&central(1)).unwrap();
        let b = h.compose(&central(2)).unwrap();
        assert!(matches!(conjugate_cover(&a, &b), Err(Error::NotConjugate(_))));
    }

    #[test]
    fn orientation_reversal_identities() {
        let l = CoverElement::translation(0.8);
        assert!(l.tau_conjugate().approx_eq(&CoverElement::translation(-0.8), 1e-15));

        for (n, s) in [(0, Sign::Plus), (2, Sign::Minus), (-1, Sign::Plus), (3, Sign::Plus)] {
            let p = CoverClass::ParaK { k: n, parab_sign: s }.representative().unwrap();
            assert_eq!(
                classify_cover(&p.tau_conjugate()).unwrap(),
                CoverClass::ParaK { k: -n, parab_sign: s.flip() }
            );
        }
        let x = CoverClass::HypK { k: 2, lambda: 0.2 }.representative().unwrap();
        assert_eq!(x.tau_conjugate().tau_conjugate(), x);
    }
}
