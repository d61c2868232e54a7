//! Arithmetic and conjugacy classes of `SL(2,R)`.
//!
//! Matrices act on column vectors. The circle action used by the cover
//! module is `v ↦ Av / |Av|`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Tolerances;

/// A real 2×2 matrix with unit determinant, rows `(a b)` and `(c d)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct Mat2 {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl TryFrom<[f64; 4]> for Mat2 {
    type Error = Error;

    fn try_from(e: [f64; 4]) -> Result<Self> {
        Mat2::new(e[0], e[1], e[2], e[3])
    }
}

impl From<Mat2> for [f64; 4] {
    fn from(m: Mat2) -> Self {
        m.entries()
    }
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Builds a matrix, rejecting determinants further than the default
    /// `det` tolerance from 1.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::with_tolerance(a, b, c, d, Tolerances::default().det)
    }

    pub fn with_tolerance(a: f64, b: f64, c: f64, d: f64, det_tol: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite(format!("matrix entries {a}, {b}, {c}, {d}")));
        }
        let det = a * d - b * c;
        if (det - 1.0).abs() > det_tol {
            return Err(Error::Determinant { det, tol: det_tol });
        }
        Ok(Mat2 { a, b, c, d })
    }

    /// Rescales an invertible matrix with positive determinant onto `SL(2,R)`.
    pub fn normalized(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::Determinant { det, tol: 0.0 });
        }
        let s = det.sqrt().recip();
        Ok(Mat2 {
            a: a * s,
            b: b * s,
            c: c * s,
            d: d * s,
        })
    }

    /// `H(λ) = diag(λ, 1/λ)`.
    pub fn hyperbolic(lambda: f64) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("H(λ) needs λ ≠ 0, got {lambda}")));
        }
        Ok(Mat2 {
            a: lambda,
            b: 0.0,
            c: 0.0,
            d: lambda.recip(),
        })
    }

    /// `P(x) = [[1, x], [0, 1]]`.
    pub fn parabolic(x: f64) -> Self {
        Mat2 {
            a: 1.0,
            b: x,
            c: 0.0,
            d: 1.0,
        }
    }

    /// Rotation `E_α` by angle `alpha`.
    pub fn rotation(alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Mat2 { a: c, b: -s, c: s, d: c }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Exact inverse for a unit-determinant matrix.
    pub fn inverse(&self) -> Mat2 {
        Mat2 {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn neg(&self) -> Mat2 {
        Mat2 {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }

    /// Matrix product with the determinant re-checked against `det_tol`.
    pub fn multiply_with(&self, rhs: &Mat2, det_tol: f64) -> Result<Mat2> {
        let p = self.product(rhs);
        let det = p.det();
        if (det - 1.0).abs() > det_tol {
            return Err(Error::Determinant { det, tol: det_tol });
        }
        Ok(p)
    }

    pub fn multiply(&self, rhs: &Mat2) -> Result<Mat2> {
        self.multiply_with(rhs, Tolerances::default().det)
    }

    pub(crate) fn product(&self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    /// `self · m · self⁻¹`.
    pub fn conjugate(&self, m: &Mat2) -> Mat2 {
        self.product(m).product(&self.inverse())
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &Mat2) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    /// `T A T` with `T = diag(1, -1)`.
    pub fn reflect(&self) -> Mat2 {
        Mat2 {
            a: self.a,
            b: -self.b,
            c: -self.c,
            d: self.d,
        }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sl2Kind {
    Hyperbolic,
    Parabolic,
    EllipticProper,
    Central,
}

/// Conjugacy class of an element of `SL(2,R)`.
///
/// Representatives are `±H(λ)` with `λ ∈ (0,1)`, `±P(±1)`, `E_β` with
/// `β ∈ (-π,0) ∪ (0,π)` and `±I`. The elliptic family needs no matrix sign
/// because `E_β` already covers both signs of the trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Sl2Class {
    Hyperbolic { lambda: f64, sign: Sign },
    Parabolic { parab_sign: Sign, sign: Sign },
    EllipticProper { beta: f64 },
    Central { sign: Sign },
}

impl Sl2Class {
    pub fn kind(&self) -> Sl2Kind {
        match self {
            Sl2Class::Hyperbolic { .. } => Sl2Kind::Hyperbolic,
            Sl2Class::Parabolic { .. } => Sl2Kind::Parabolic,
            Sl2Class::EllipticProper { .. } => Sl2Kind::EllipticProper,
            Sl2Class::Central { .. } => Sl2Kind::Central,
        }
    }

    /// Sign of the `±` in front of the representative; for elliptic classes
    /// the sign of the trace.
    pub fn matrix_sign(&self) -> Sign {
        match *self {
            Sl2Class::Hyperbolic { sign, .. }
            | Sl2Class::Parabolic { sign, .. }
            | Sl2Class::Central { sign } => sign,
            Sl2Class::EllipticProper { beta } => Sign::of(beta.cos()),
        }
    }

    /// Same class up to `tol` on the continuous parameter.
    pub fn approx_eq(&self, other: &Sl2Class, tol: f64) -> bool {
        match (*self, *other) {
            (
                Sl2Class::Hyperbolic { lambda: l1, sign: s1 },
                Sl2Class::Hyperbolic { lambda: l2, sign: s2 },
            ) => s1 == s2 && (l1 - l2).abs() <= tol,
            (
                Sl2Class::Parabolic { parab_sign: p1, sign: s1 },
                Sl2Class::Parabolic { parab_sign: p2, sign: s2 },
            ) => p1 == p2 && s1 == s2,
            (Sl2Class::EllipticProper { beta: b1 }, Sl2Class::EllipticProper { beta: b2 }) => {
                (b1 - b2).abs() <= tol
            }
            (Sl2Class::Central { sign: s1 }, Sl2Class::Central { sign: s2 }) => s1 == s2,
            _ => false,
        }
    }
}

/// The normal-form matrix of a class.
pub fn representative(class: &Sl2Class) -> Result<Mat2> {
    match *class {
        Sl2Class::Hyperbolic { lambda, sign } => {
            if !(lambda > 0.0 && lambda < 1.0) {
                return Err(Error::InvalidParameter(format!("λ = {lambda} not in (0,1)")));
            }
            let h = Mat2::hyperbolic(lambda)?;
            Ok(signed(&h, sign))
        }
        Sl2Class::Parabolic { parab_sign, sign } => {
            Ok(signed(&Mat2::parabolic(parab_sign.value()), sign))
        }
        Sl2Class::EllipticProper { beta } => {
            if !(beta.abs() < PI && beta != 0.0) {
                return Err(Error::InvalidParameter(format!("β = {beta} not in (-π,0)∪(0,π)")));
            }
            Ok(Mat2::rotation(beta))
        }
        Sl2Class::Central { sign } => Ok(signed(&Mat2::IDENTITY, sign)),
    }
}

fn signed(m: &Mat2, s: Sign) -> Mat2 {
    match s {
        Sign::Plus => *m,
        Sign::Minus => m.neg(),
    }
}

pub fn classify_sl2(m: &Mat2) -> Result<Sl2Class> {
    classify_sl2_with(m, &Tolerances::default())
}

pub fn classify_sl2_with(m: &Mat2, tol: &Tolerances) -> Result<Sl2Class> {
    Ok(reduce(m, tol)?.0)
}

/// Classifies `m` and returns `V` (unit determinant) with `V⁻¹ m V` equal to
/// the class representative.
fn reduce(m: &Mat2, tol: &Tolerances) -> Result<(Sl2Class, Mat2)> {
    let t = m.trace();
    let excess = t.abs() - 2.0;
    if excess > tol.trace {
        let sign = Sign::of(t);
        let big = 0.5 * (t.abs() + (t * t - 4.0).sqrt());
        let lambda = big.recip();
        let v1 = eigenvector(m, sign.value() * lambda);
        let mut v2 = eigenvector(m, sign.value() * big);
        if cross(v1, v2) < 0.0 {
            v2 = [-v2[0], -v2[1]];
        }
        let basis = Mat2::normalized(v1[0], v2[0], v1[1], v2[1])?;
        return Ok((Sl2Class::Hyperbolic { lambda, sign }, basis));
    }
    if excess < -tol.trace {
        let cos_b = 0.5 * t;
        let sin_b = m.c.signum() * (1.0 - cos_b * cos_b).max(0.0).sqrt();
        let beta = sin_b.atan2(cos_b);
        // K = (A - cos β)/sin β squares to -I; columns e1, K e1 give the basis.
        let k1 = [(m.a - cos_b) / sin_b, m.c / sin_b];
        let basis = Mat2::normalized(1.0, k1[0], 0.0, k1[1])?;
        return Ok((Sl2Class::EllipticProper { beta }, basis));
    }

    let sign = Sign::of(t);
    let s = sign.value();
    let n = [s * m.a - 1.0, s * m.b, s * m.c, s * m.d - 1.0];
    let n_norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n_norm <= tol.conj {
        return Ok((Sl2Class::Central { sign }, Mat2::IDENTITY));
    }
    // X ∧ NX for X = e1 is n21, for X = e2 it is -n12.
    let (w, x) = if n[2].abs() >= n[1].abs() {
        (n[2], [1.0, 0.0])
    } else {
        (-n[1], [0.0, 1.0])
    };
    // The secondary test: a genuine parabolic has |X ∧ NX| comparable to |N|
    // and a trace defect negligible against |N|².
    if w.abs() < 0.25 * n_norm || excess.abs() > n_norm * n_norm {
        return Err(Error::IllConditioned(format!(
            "trace {t} is within {:e} of ±2 but {m} is neither central nor parabolic",
            tol.trace
        )));
    }
    let parab_sign = Sign::of(-w);
    let nx = [n[0] * x[0] + n[1] * x[1], n[2] * x[0] + n[3] * x[1]];
    let p = parab_sign.value();
    let basis = Mat2::normalized(p * nx[0], x[0], p * nx[1], x[1])?;
    Ok((Sl2Class::Parabolic { parab_sign, sign }, basis))
}

fn cross(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

/// Unit eigenvector with its largest component positive.
fn eigenvector(m: &Mat2, mu: f64) -> [f64; 2] {
    let r1 = [m.b, mu - m.a];
    let r2 = [mu - m.d, m.c];
    let n1 = r1[0].hypot(r1[1]);
    let n2 = r2[0].hypot(r2[1]);
    let (v, n) = if n1 >= n2 { (r1, n1) } else { (r2, n2) };
    let v = [v[0] / n, v[1] / n];
    if v[0].abs() >= v[1].abs() {
        if v[0] < 0.0 {
            return [-v[0], -v[1]];
        }
    } else if v[1] < 0.0 {
        return [-v[0], -v[1]];
    }
    v
}

pub fn conjugator(a: &Mat2, b: &Mat2) -> Result<Mat2> {
    conjugator_with(a, b, &Tolerances::default())
}

/// A matrix `C` with `C A C⁻¹ = B`, built by reducing both operands to
/// their normal form.
pub fn conjugator_with(a: &Mat2, b: &Mat2, tol: &Tolerances) -> Result<Mat2> {
    let (ca, va) = reduce(a, tol)?;
    let (cb, vb) = reduce(b, tol)?;
    if !ca.approx_eq(&cb, tol.conj) {
        return Err(Error::NotConjugate(format!("{ca:?} vs {cb:?}")));
    }
    let c = vb.product(&va.inverse());
    let residual = c.conjugate(a).distance(b);
    if residual > tol.conj * b.frobenius_norm().max(1.0) {
        return Err(Error::IllConditioned(format!(
            "conjugator residual {residual:e} exceeds {:e}",
            tol.conj
        )));
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq)]
pub enum EigenAngles {
    Two([f64; 2]),
    One(f64),
    /// `±I`: every direction is an eigenvector.
    Degenerate,
}

impl EigenAngles {
    /// A representative fixed direction; 0 for the degenerate case.
    pub fn first(&self) -> f64 {
        match self {
            EigenAngles::Two([t, _]) => *t,
            EigenAngles::One(t) => *t,
            EigenAngles::Degenerate => 0.0,
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        match self {
            EigenAngles::Two(t) => t.to_vec(),
            EigenAngles::One(t) => vec![*t],
            EigenAngles::Degenerate => Vec::new(),
        }
    }
}

pub fn eigen_angles(m: &Mat2) -> Result<EigenAngles> {
    eigen_angles_with(m, &Tolerances::default())
}

/// Directions `(cos θ, sin θ)`, `θ ∈ [0, π)`, spanning real eigenspaces.
pub fn eigen_angles_with(m: &Mat2, tol: &Tolerances) -> Result<EigenAngles> {
    let (class, basis) = reduce(m, tol)?;
    match class {
        Sl2Class::Hyperbolic { .. } => {
            let mut t = [
                angle_mod_pi(basis.a, basis.c),
                angle_mod_pi(basis.b, basis.d),
            ];
            t.sort_by(f64::total_cmp);
            Ok(EigenAngles::Two(t))
        }
        // First basis column is N·X, which spans the kernel of N.
        Sl2Class::Parabolic { .. } => Ok(EigenAngles::One(angle_mod_pi(basis.a, basis.c))),
        Sl2Class::EllipticProper { .. } => Err(Error::NoRealEigenvector),
        Sl2Class::Central { .. } => Ok(EigenAngles::Degenerate),
    }
}

fn angle_mod_pi(x: f64, y: f64) -> f64 {
    let mut t = y.atan2(x);
    if t < 0.0 {
        t += PI;
    }
    if t >= PI {
        t -= PI;
    }
    // Snap values a rounding error below π back to 0.
    if PI - t < 1e-14 {
        t = 0.0;
    }
    t
}

/// `E_{π/2}`, the flip `H(λ) ↦ H(1/λ)` under conjugation.
pub fn quarter_turn() -> Mat2 {
    Mat2::rotation(FRAC_PI_2)
}
