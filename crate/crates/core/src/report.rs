//! Geometric profile of a closed projective curve from its holonomy.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cover::{self, CoverClass, CoverElement};
use crate::error::{Error, Result};
use crate::hill::{self, MonodromyOptions, Potential};
use crate::sl2::{self, Sign};
use crate::winding::{self, ExtWinding, HalfInt};
use crate::Tolerances;

/// Identity component of the orientation-preserving automorphism group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Aut0 {
    Circle,
    Line,
    ThreeDim,
}

/// Compatible flat affine connections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Affine {
    No,
    UniqueWithParallelSection,
    TwoWithoutParallelSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub cls: CoverClass,
    pub generator: CoverElement,
    #[serde(rename = "W_C")]
    pub w_c: HalfInt,
    #[serde(rename = "W_cover")]
    pub w_cover: ExtWinding,
    pub fd_windings: Vec<HalfInt>,
    pub aut0: Aut0,
    pub aut_index: u64,
    pub resonance_count: u64,
    pub affine: Affine,
    pub homogeneous: bool,
    pub yamabe_obstructed: bool,
}

fn resonance_count(class: &CoverClass) -> u64 {
    match *class {
        CoverClass::ParaK { k, .. } if k >= 1 => k as u64,
        CoverClass::HypK { k, .. } if k >= 1 => 2 * k as u64,
        _ => 0,
    }
}

pub fn curve_report(e: &CoverElement) -> Result<CurveReport> {
    curve_report_with(e, &Tolerances::default())
}

pub fn curve_report_with(e: &CoverElement, tol: &Tolerances) -> Result<CurveReport> {
    let cls = cover::classify_cover_with(e, tol)?.class;
    if !cover::is_positive(&cls) {
        return Err(Error::NotPositive(cls.to_string()));
    }
    let resonance_count = resonance_count(&cls);
    let homogeneous = resonance_count == 0;
    let w_c = winding::curve_winding(&cls)?;
    let aut0 = match cls {
        CoverClass::CentralK { .. } => Aut0::ThreeDim,
        CoverClass::EllAlpha { .. }
        | CoverClass::HypK { k: 0, .. }
        | CoverClass::ParaK { k: 0, parab_sign: Sign::Minus } => Aut0::Circle,
        _ => Aut0::Line,
    };
    let affine = match cls {
        CoverClass::ParaK { k: 0, parab_sign: Sign::Minus } => Affine::UniqueWithParallelSection,
        CoverClass::HypK { k: 0, .. } => Affine::TwoWithoutParallelSection,
        _ => Affine::No,
    };
    Ok(CurveReport {
        cls,
        generator: *e,
        w_c,
        w_cover: winding::cover_winding(&cls)?,
        fd_windings: winding::fundamental_domain_windings(&cls)?,
        aut0,
        aut_index: if homogeneous { 1 } else { w_c.twice() / 2 },
        resonance_count,
        affine,
        homogeneous,
        yamabe_obstructed: !homogeneous,
    })
}

/// Fixed points of `Ã` modulo its own action, listed in `[a, Ã(a))` where
/// `a` is the smallest nonnegative fixed point of the canonical part.
pub fn resonance_points(e: &CoverElement) -> Result<Vec<f64>> {
    let cls = cover::classify_cover(e)?;
    let n = resonance_count(&cls);
    if n == 0 {
        return Err(Error::NoResonancePoints);
    }
    let k = cls.k() as f64;
    let mut base: Vec<f64> = sl2::eigen_angles(e.matrix())?
        .to_vec()
        .into_iter()
        .map(|t| t.rem_euclid(PI))
        .collect();
    base.sort_by(f64::total_cmp);
    base.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    let a = base[0];
    let mut points: Vec<f64> = (0..cls.k() as usize)
        .flat_map(|j| base.iter().map(move |t| t + j as f64 * PI))
        .filter(|x| *x >= a && *x < a + k * PI)
        .collect();
    points.sort_by(f64::total_cmp);
    Ok(points)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct YamabeAnswer {
    pub obstructed: bool,
    pub cls: CoverClass,
}

/// Whether no reparametrization makes the zero-order term constant.
pub fn yamabe_obstruction(f: &Potential) -> Result<YamabeAnswer> {
    yamabe_obstruction_with(f, &MonodromyOptions::default(), &Tolerances::default())
}

pub fn yamabe_obstruction_with(
    f: &Potential,
    opts: &MonodromyOptions,
    tol: &Tolerances,
) -> Result<YamabeAnswer> {
    let (_, c) = hill::classify_potential_with(f, opts, tol)?;
    Ok(YamabeAnswer {
        obstructed: resonance_count(&c.class) > 0,
        cls: c.class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn report(c: CoverClass) -> CurveReport {
        curve_report(&c.representative().unwrap()).unwrap()
    }

    #[test]
    fn hyperbolic_three() {
        let r = report(CoverClass::HypK { k: 3, lambda: 0.5 });
        assert_eq!(r.resonance_count, 6);
        assert_eq!(r.aut0, Aut0::Line);
        assert_eq!(r.aut_index, 3);
        assert_eq!(r.w_c, HalfInt::integer(3));
        assert_eq!(r.fd_windings, vec![HalfInt::half(2), HalfInt::integer(3), HalfInt::half(3)]);
        assert!(r.yamabe_obstructed && !r.homogeneous);
    }

    #[test]
    fn affine_parabolic() {
        let r = report(CoverClass::ParaK { k: 0, parab_sign: Sign::Minus });
        assert_eq!(r.affine, Affine::UniqueWithParallelSection);
        assert_eq!(r.aut0, Aut0::Circle);
        assert_eq!(r.w_c, HalfInt::half(0));
        assert_eq!(r.w_cover, ExtWinding::Finite(HalfInt::integer(1)));
        assert!(r.homogeneous);
    }

    #[test]
    fn central_two() {
        let r = report(CoverClass::CentralK { k: 2 });
        assert_eq!(r.aut0, Aut0::ThreeDim);
        assert_eq!(r.w_c, HalfInt::integer(2));
        assert_eq!(r.fd_windings, vec![HalfInt::integer(2)]);
    }

    #[test]
    fn rejects_non_positive() {
        let e = CoverClass::HypK { k: 1, lambda: 0.5 }.representative().unwrap().invert();
        assert!(matches!(curve_report(&e), Err(Error::NotPositive(_))));
    }

    #[test]
    fn resonance_examples() {
        let p = CoverClass::ParaK { k: 2, parab_sign: Sign::Minus }.representative().unwrap();
        let pts = resonance_points(&p).unwrap();
        assert_eq!(pts.len(), 2);
        assert_abs_diff_eq!(pts[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pts[1], PI, epsilon = 1e-12);

        let h = CoverClass::HypK { k: 1, lambda: 0.3 }.representative().unwrap();
        let pts = resonance_points(&h).unwrap();
        assert_eq!(pts.len(), 2);
        assert_abs_diff_eq!(pts[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pts[1], PI / 2.0, epsilon = 1e-12);

        let e = CoverClass::EllAlpha { alpha: 1.0 }.representative().unwrap();
        assert!(matches!(resonance_points(&e), Err(Error::NoResonancePoints)));
    }

    #[test]
    fn constant_potentials_unobstructed() {
        for c in [1.0, 0.0, -1.0, PI * PI] {
            assert!(!yamabe_obstruction(&Potential::constant(c)).unwrap().obstructed);
        }
    }
}
