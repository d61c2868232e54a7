//! Hill's equation `x'' + F x = 0` with 1-periodic `F`: lifted monodromy,
//! developing map, Schwarzian derivatives and reparametrization gauge.
//!
//! The fundamental matrix `R` solves `R' = R Q` with `Q = [[0, -F], [1, 0]]`
//! and `R(0) = I`. Its rows are `(x_i, x_i')`, so the first column
//! `(x_1, x_2)` is a pair of solutions with unit Wronskian and its direction
//! angle `ψ̃` is a developing map with `ψ̃' = 1 / (x_1² + x_2²)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cover::{self, Classification, CoverClass, CoverElement};
use crate::error::{Error, Result};
use crate::ode::{self, StepControl};
use crate::sl2::Mat2;
use crate::Tolerances;

pub type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value")]
pub enum Source {
    Expression(String),
    Samples(usize),
    Constant(f64),
    Gauge,
    Function,
}

/// A 1-periodic potential, normalised from its original period.
#[derive(Clone)]
pub struct Potential {
    eval: Profile,
    period: f64,
    source: Source,
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Potential")
            .field("period", &self.period)
            .field("source", &self.source)
            .finish_non_exhaustive()
    }
}

const PROBES: usize = 64;

impl Potential {
    pub fn constant(c: f64) -> Self {
        Potential {
            eval: Arc::new(move |_| c),
            period: 1.0,
            source: Source::Constant(c),
        }
    }

    /// Wraps `f` with period `period`; see [`normalize_period`].
    pub fn from_fn<F>(f: F, period: f64, source: Source) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        normalize_period(f, period, source)
    }

    /// Trigonometric interpolation of equispaced samples over one period.
    pub fn from_samples(values: &[f64], period: f64) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::InvalidParameter("need at least two samples".into()));
        }
        let nf = n as f64;
        let mean = values.iter().sum::<f64>() / nf;
        let half = (n - 1) / 2;
        let mut coef = Vec::with_capacity(half);
        for m in 1..=half {
            let (mut a, mut b) = (0.0, 0.0);
            for (j, v) in values.iter().enumerate() {
                let w = 2.0 * PI * (m * j) as f64 / nf;
                a += v * w.cos();
                b += v * w.sin();
            }
            coef.push((2.0 * a / nf, 2.0 * b / nf));
        }
        let nyquist = (n % 2 == 0).then(|| {
            values
                .iter()
                .enumerate()
                .map(|(j, v)| if j % 2 == 0 { *v } else { -*v })
                .sum::<f64>()
                / nf
        });
        let g = move |t: f64| -> f64 {
            let s = t / period;
            let mut acc = mean;
            for (m, (a, b)) in coef.iter().enumerate() {
                let w = 2.0 * PI * (m + 1) as f64 * s;
                acc += a * w.cos() + b * w.sin();
            }
            if let Some(c) = nyquist {
                acc += c * (PI * nf * s).cos();
            }
            acc
        };
        normalize_period(g, period, Source::Samples(n))
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// Period before normalisation.
    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn profile(&self) -> Profile {
        Arc::clone(&self.eval)
    }
}

/// `F̂(s) = T² F(T s)`: the affine reparametrization making `F̂` 1-periodic.
/// The classification of `F̂` is the classification of `F`.
pub fn normalize_period<F>(raw: F, period: f64, source: Source) -> Result<Potential>
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    if !(period > 0.0) || !period.is_finite() {
        return Err(Error::InvalidParameter(format!("period {period} must be positive")));
    }
    let eval: Profile = if period == 1.0 {
        Arc::new(raw)
    } else {
        let t2 = period * period;
        Arc::new(move |s| t2 * raw(period * s))
    };
    for i in 0..PROBES {
        let t = i as f64 / PROBES as f64;
        let (f0, f1) = (eval(t), eval(t + 1.0));
        if !f0.is_finite() || !f1.is_finite() {
            return Err(Error::NonFinite(format!("potential at t = {t}")));
        }
        let defect = (f1 - f0).abs();
        if defect >= 1e-9 * f0.abs().max(1.0) {
            return Err(Error::NotPeriodic { t, defect });
        }
    }
    Ok(Potential {
        eval,
        period,
        source,
    })
}

/// The potentials used throughout the test and benchmark suites.
pub fn builtin_potentials() -> Vec<(&'static str, Potential)> {
    let trig = |name: &'static str, a: f64, q: f64| {
        let p = Potential::from_fn(
            move |t| a + q * (2.0 * PI * t).cos(),
            1.0,
            Source::Expression(name.to_string()),
        )
        .expect("trigonometric potentials are periodic");
        (name, p)
    };
    vec![
        ("0", Potential::constant(0.0)),
        ("1", Potential::constant(1.0)),
        ("pi^2", Potential::constant(PI * PI)),
        ("-1", Potential::constant(-1.0)),
        trig("2 + cos(2*pi*t)", 2.0, 1.0),
        trig("10 + 3*cos(2*pi*t)", 10.0, 3.0),
        trig("25 - 8*cos(2*pi*t)", 25.0, -8.0),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonodromyOptions {
    /// Per-step relative and absolute tolerance.
    pub tol: f64,
    pub max_steps: usize,
}

impl Default for MonodromyOptions {
    fn default() -> Self {
        MonodromyOptions {
            tol: 1e-10,
            max_steps: 1_000_000,
        }
    }
}

impl MonodromyOptions {
    pub fn with_tol(tol: f64) -> Self {
        MonodromyOptions {
            tol,
            ..Default::default()
        }
    }

    fn control(&self) -> StepControl {
        StepControl {
            max_steps: self.max_steps,
            ..StepControl::with_tol(self.tol)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonodromyResult {
    /// Period matrix `R(1)`.
    pub matrix: Mat2,
    /// Lifted angle `ψ̃(1)`, consistent with `matrix · e1`.
    pub psi1: f64,
    pub cover: CoverElement,
    pub steps: usize,
    /// Largest `|det R(t) - 1|` seen along the trajectory.
    pub det_drift: f64,
    /// Gap between the integrated angle and the anchor read off `R(1)`.
    pub lift_defect: f64,
}

/// State layout: `[x1, x1', x2, x2', ψ̃]`.
type State = [f64; 5];

const START: State = [1.0, 0.0, 0.0, 1.0, 0.0];

fn rhs(f: &Potential) -> impl Fn(f64, &State) -> State + '_ {
    move |t, y| {
        let q = f.eval(t);
        [y[1], -q * y[0], y[3], -q * y[2], 1.0 / (y[0] * y[0] + y[2] * y[2])]
    }
}

fn det_of(y: &State) -> f64 {
    y[0] * y[3] - y[1] * y[2]
}

pub fn integrate_monodromy(f: &Potential, opts: &MonodromyOptions) -> Result<MonodromyResult> {
    let mut drift: f64 = 0.0;
    let (y, stats) = ode::integrate(rhs(f), 0.0, START, 1.0, &opts.control(), |_, y| {
        drift = drift.max((det_of(y) - 1.0).abs());
    })?;
    let allowed = Tolerances::default().det.max(100.0 * opts.tol);
    if drift > allowed {
        return Err(Error::Determinant {
            det: 1.0 + drift,
            tol: allowed,
        });
    }
    let matrix = Mat2::normalized(y[0], y[1], y[2], y[3])?;
    let cover = CoverElement::lift_near(matrix, y[4]);
    Ok(MonodromyResult {
        matrix,
        psi1: cover.t0(),
        cover,
        steps: stats.accepted,
        det_drift: drift,
        lift_defect: (cover.t0() - y[4]).abs(),
    })
}

pub fn classify_potential(f: &Potential) -> Result<CoverClass> {
    Ok(classify_potential_with(f, &MonodromyOptions::default(), &Tolerances::default())?.1.class)
}

pub fn classify_potential_with(
    f: &Potential,
    opts: &MonodromyOptions,
    tol: &Tolerances,
) -> Result<(MonodromyResult, Classification)> {
    let m = integrate_monodromy(f, opts)?;
    let c = cover::classify_cover_with(&m.cover, tol)?;
    Ok((m, c))
}

/// `n` equispaced samples `(t, ψ̃(t))` on `[0, t_max]`.
pub fn developing_map(f: &Potential, t_max: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    developing_map_with(f, t_max, n, &MonodromyOptions::default())
}

pub fn developing_map_with(
    f: &Potential,
    t_max: f64,
    n: usize,
    opts: &MonodromyOptions,
) -> Result<Vec<(f64, f64)>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 samples, got {n}")));
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidParameter(format!("t_max = {t_max} must be positive")));
    }
    let ctl = opts.control();
    let mut out = Vec::with_capacity(n);
    let mut y = START;
    let mut t = 0.0;
    out.push((0.0, 0.0));
    for i in 1..n {
        let t1 = t_max * i as f64 / (n - 1) as f64;
        y = ode::integrate(rhs(f), t, y, t1, &ctl, |_, _| {})?.0;
        t = t1;
        out.push((t, y[4]));
    }
    Ok(out)
}

/// Full solution state along `[0, t_max]`, sampled at nodes so that `ψ̃`
/// and its derivatives can be evaluated anywhere by a short integration.
pub struct Development {
    potential: Potential,
    ctl: StepControl,
    nodes: Vec<(f64, State)>,
    spacing: f64,
}

impl Development {
    /// Nodes every `1/32` on `[t_lo, t_hi]` (which must contain 0) at
    /// per-step tolerance `tol`.
    pub fn new(f: &Potential, t_lo: f64, t_hi: f64, tol: f64) -> Result<Self> {
        if !(t_lo <= 0.0 && 0.0 <= t_hi) {
            return Err(Error::InvalidParameter("development range must contain 0".into()));
        }
        let spacing = 1.0 / 32.0;
        let ctl = StepControl::with_tol(tol);
        let mut back = Vec::new();
        let mut y = START;
        let mut t = 0.0;
        while t > t_lo {
            let t1 = (t - spacing).max(t_lo - spacing);
            y = ode::integrate(rhs(f), t, y, t1, &ctl, |_, _| {})?.0;
            t = t1;
            back.push((t, y));
        }
        back.reverse();
        let mut nodes = back;
        nodes.push((0.0, START));
        let (mut y, mut t) = (START, 0.0);
        while t < t_hi {
            let t1 = t + spacing;
            y = ode::integrate(rhs(f), t, y, t1, &ctl, |_, _| {})?.0;
            t = t1;
            nodes.push((t, y));
        }
        Ok(Development {
            potential: f.clone(),
            ctl,
            nodes,
            spacing,
        })
    }

    fn nearest(&self, t: f64) -> usize {
        let t_first = self.nodes[0].0;
        let i = ((t - t_first) / self.spacing).round();
        (i.max(0.0) as usize).min(self.nodes.len() - 1)
    }

    fn state_from(&self, node: usize, t: f64) -> Result<State> {
        let (tn, yn) = self.nodes[node];
        Ok(ode::integrate(rhs(&self.potential), tn, yn, t, &self.ctl, |_, _| {})?.0)
    }

    /// `ψ̃(t)`.
    pub fn psi(&self, t: f64) -> Result<f64> {
        Ok(self.state_from(self.nearest(t), t)?[4])
    }

    /// `ψ̃` near `center`, always integrated from the same node so that
    /// nearby evaluations share their step sequence.
    pub fn local_psi(&self, center: f64) -> impl Fn(f64) -> f64 + '_ {
        let node = self.nearest(center);
        move |t| self.state_from(node, t).map(|y| y[4]).unwrap_or(f64::NAN)
    }

    /// Schwarzian of the developing map read in an affine chart of `RP¹`,
    /// `S(tan ψ̃) = S(ψ̃) + 2 ψ̃'²`, by finite differences. Equals `2F`.
    pub fn chart_schwarzian(&self, t: f64) -> Result<f64> {
        let jet = finite_jet(&self.local_psi(t), t, CHART_STEP);
        if !jet.d1.is_finite() {
            return Err(Error::NonFinite(format!("developing map near t = {t}")));
        }
        Ok(jet.schwarzian() + 2.0 * jet.d1 * jet.d1)
    }

    /// Analytic jet of the inverse map `φ = ψ̃⁻¹` at `s = ψ̃(t)`.
    fn inverse_jet(&self, t: f64, y: &State) -> Jet {
        let (x1, d1, x2, d2) = (y[0], y[1], y[2], y[3]);
        let r = x1 * x1 + x2 * x2;
        let r1 = 2.0 * (x1 * d1 + x2 * d2);
        let r2 = 2.0 * (d1 * d1 + d2 * d2 - self.potential.eval(t) * r);
        Jet {
            value: t,
            d1: r,
            d2: r1 * r,
            d3: (r2 * r + r1 * r1) * r,
        }
    }

    /// Solves `ψ̃(t) = s` for `t` in `[lo, hi]`, Newton safeguarded by
    /// bisection.
    fn invert(&self, s: f64, lo: f64, hi: f64) -> Result<(f64, State)> {
        let (mut lo, mut hi) = (lo, hi);
        let mut t = 0.5 * (lo + hi);
        for _ in 0..100 {
            let y = self.state_from(self.nearest(t), t)?;
            let gap = y[4] - s;
            if gap > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let step = gap * (y[0] * y[0] + y[2] * y[2]);
            if step.abs() < 1e-14 * t.abs().max(1.0) || hi - lo < 1e-15 {
                return Ok((t, y));
            }
            let next = t - step;
            t = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        }
        Err(Error::IllConditioned(format!("no convergence inverting ψ̃ at s = {s}")))
    }
}

/// Value and first three derivatives of a map at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl Jet {
    pub fn schwarzian(&self) -> f64 {
        let q = self.d2 / self.d1;
        self.d3 / self.d1 - 1.5 * q * q
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiffeoMode {
    /// A lift of a circle diffeomorphism: `φ(t + 1) = φ(t) + 1`.
    CircleLift,
    /// A diffeomorphism from the open interval `(lo, hi)` onto its image.
    Interval { lo: f64, hi: f64 },
}

/// An orientation-preserving reparametrization with access to its 3-jet.
#[derive(Clone)]
pub struct Diffeo {
    jet: Arc<dyn Fn(f64) -> Jet + Send + Sync>,
    mode: DiffeoMode,
}

impl fmt::Debug for Diffeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Diffeo").field("mode", &self.mode).finish_non_exhaustive()
    }
}

impl Diffeo {
    pub fn with_jet<J>(jet: J, mode: DiffeoMode) -> Self
    where
        J: Fn(f64) -> Jet + Send + Sync + 'static,
    {
        Diffeo {
            jet: Arc::new(jet),
            mode,
        }
    }

    /// Derivatives taken by Richardson-extrapolated central differences.
    pub fn from_fn<F>(f: F, mode: DiffeoMode) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Diffeo::with_jet(move |t| finite_jet(&f, t, JET_STEP), mode)
    }

    pub fn identity() -> Self {
        Diffeo::with_jet(
            |t| Jet {
                value: t,
                d1: 1.0,
                d2: 0.0,
                d3: 0.0,
            },
            DiffeoMode::CircleLift,
        )
    }

    pub fn mode(&self) -> DiffeoMode {
        self.mode
    }

    pub fn jet(&self, t: f64) -> Jet {
        (self.jet)(t)
    }

    pub fn value(&self, t: f64) -> f64 {
        self.jet(t).value
    }
}

/// Base step for the finite-difference stencils, scaled by `|t| + 1`.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Fixed base step for the jets of [`Diffeo::from_fn`], where no step
/// selection is affordable.
pub const JET_STEP: f64 = 2e-2;

/// Step for differentiating an integrated developing map, whose higher
/// derivatives grow with `|F|`.
pub const CHART_STEP: f64 = 2e-3;

fn stencil<F: Fn(f64) -> f64 + ?Sized>(f: &F, t: f64, h: f64) -> (f64, f64, f64) {
    let p1 = f(t + h);
    let m1 = f(t - h);
    let p2 = f(t + 2.0 * h);
    let m2 = f(t - 2.0 * h);
    let p3 = f(t + 3.0 * h);
    let m3 = f(t - 3.0 * h);
    let f0 = f(t);
    let d1 = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
    let d2 = (-p2 + 16.0 * p1 - 30.0 * f0 + 16.0 * m1 - m2) / (12.0 * h * h);
    let d3 = (-p3 + 8.0 * p2 - 13.0 * p1 + 13.0 * m1 - 8.0 * m2 + m3) / (8.0 * h * h * h);
    (d1, d2, d3)
}

/// Fourth-order central differences at steps `h`, `h/2` and `h/4`, combined
/// by two rounds of Richardson extrapolation.
pub fn finite_jet<F: Fn(f64) -> f64 + ?Sized>(f: &F, t: f64, h: f64) -> Jet {
    let h = h * (t.abs() + 1.0);
    let (a1, a2, a3) = stencil(f, t, h);
    let (b1, b2, b3) = stencil(f, t, 0.5 * h);
    let (c1, c2, c3) = stencil(f, t, 0.25 * h);
    let rich = |coarse: f64, mid: f64, fine: f64| {
        let lo = (16.0 * mid - coarse) / 15.0;
        let hi = (16.0 * fine - mid) / 15.0;
        (64.0 * hi - lo) / 63.0
    };
    Jet {
        value: f(t),
        d1: rich(a1, b1, c1),
        d2: rich(a2, b2, c2),
        d3: rich(a3, b3, c3),
    }
}

/// `S(φ)(t) = φ'''/φ' - (3/2)(φ''/φ')²` by finite differences.
///
/// The jet is evaluated on the base steps `h/2, h, 2h, ..., 64h` and the
/// value that agrees best with its neighbour on that ladder is returned, so
/// the result stays accurate when the scale of `φ` is far from `h`.
pub fn schwarzian<F: Fn(f64) -> f64 + ?Sized>(phi: &F, t: f64, h: f64) -> Result<f64> {
    let jets: Vec<Jet> = (-1..=6).map(|j| finite_jet(phi, t, h * 2f64.powi(j))).collect();
    let base = &jets[1];
    if !(base.d1.abs() >= 1e-8) {
        return Err(Error::NotImmersion(base.d1));
    }
    let values: Vec<f64> = jets.iter().map(Jet::schwarzian).collect();
    let best = values
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0].is_finite() && w[1].is_finite())
        .min_by(|(_, a), (_, b)| (a[0] - a[1]).abs().total_cmp(&(b[0] - b[1]).abs()))
        .map(|(i, _)| values[i])
        .unwrap_or(values[1]);
    Ok(best)
}

fn gauge_value(f: &Profile, jet: &Jet) -> f64 {
    jet.d1 * jet.d1 * f(jet.value) + 0.5 * jet.schwarzian()
}

/// `(φ')² F∘φ + ½ S(φ)` for a circle-diffeomorphism lift `φ`.
pub fn gauge_transform(f: &Potential, phi: &Diffeo) -> Result<Potential> {
    if phi.mode != DiffeoMode::CircleLift {
        return Err(Error::NotDiffeo("use gauge_transform_local for interval maps".into()));
    }
    for i in 0..PROBES {
        let t = i as f64 / PROBES as f64;
        let j = phi.jet(t);
        let shift = phi.value(t + 1.0) - j.value;
        if (shift - 1.0).abs() > 1e-9 {
            return Err(Error::NotDiffeo(format!("φ(t+1) - φ(t) = {shift} at t = {t}")));
        }
        if !(j.d1 > 0.0) {
            return Err(Error::NotDiffeo(format!("φ'({t}) = {} is not positive", j.d1)));
        }
    }
    let profile = f.profile();
    let phi = phi.clone();
    normalize_period(
        move |t| gauge_value(&profile, &phi.jet(t)),
        1.0,
        Source::Gauge,
    )
}

/// A zero-order term living on an open interval.
#[derive(Clone)]
pub struct LocalPotential {
    eval: Profile,
    pub lo: f64,
    pub hi: f64,
}

impl LocalPotential {
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }
}

/// The gauge law for a diffeomorphism of an interval onto part of the line.
pub fn gauge_transform_local(f: &Potential, phi: &Diffeo) -> Result<LocalPotential> {
    let DiffeoMode::Interval { lo, hi } = phi.mode else {
        return Err(Error::NotDiffeo("use gauge_transform for circle lifts".into()));
    };
    if !(lo < hi) {
        return Err(Error::NotDiffeo(format!("empty domain ({lo}, {hi})")));
    }
    for i in 1..16 {
        let t = lo + (hi - lo) * i as f64 / 16.0;
        let d1 = phi.jet(t).d1;
        if !(d1 > 0.0) {
            return Err(Error::NotDiffeo(format!("φ'({t}) = {d1} is not positive")));
        }
    }
    let profile = f.profile();
    let phi = phi.clone();
    Ok(LocalPotential {
        eval: Arc::new(move |t| gauge_value(&profile, &phi.jet(t))),
        lo,
        hi,
    })
}

/// A projective parametrization around `t0`: the inverse of the affine
/// chart `s = tan(ψ̃(t) - ψ̃(t0))` of the developing map, with exact jets
/// taken from the solution state. Gauging `F` by it gives the zero potential.
pub fn projective_parametrization(f: &Potential, t0: f64) -> Result<Diffeo> {
    let lo_t = t0 - 0.5;
    let hi_t = t0 + 0.5;
    let dev = Arc::new(Development::new(f, lo_t.min(0.0), hi_t.max(0.0), 1e-13)?);
    let u = dev.psi(t0)?;
    let psi_lo = dev.psi(lo_t)?;
    let psi_hi = dev.psi(hi_t)?;
    // Stay clear of the poles of the chart.
    let lo = (psi_lo - u).max(-1.4).tan();
    let hi = (psi_hi - u).min(1.4).tan();
    Ok(Diffeo::with_jet(
        move |s| {
            let q = 1.0 + s * s;
            let h = u + s.atan();
            let (h1, h2, h3) = (1.0 / q, -2.0 * s / (q * q), (6.0 * s * s - 2.0) / (q * q * q));
            match dev.invert(h, lo_t, hi_t) {
                Ok((t, y)) => {
                    let g = dev.inverse_jet(t, &y);
                    Jet {
                        value: t,
                        d1: g.d1 * h1,
                        d2: g.d2 * h1 * h1 + g.d1 * h2,
                        d3: g.d3 * h1 * h1 * h1 + 3.0 * g.d2 * h1 * h2 + g.d1 * h3,
                    }
                }
                Err(_) => Jet {
                    value: f64::NAN,
                    d1: f64::NAN,
                    d2: f64::NAN,
                    d3: f64::NAN,
                },
            }
        },
        DiffeoMode::Interval { lo, hi },
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub count: u64,
    /// `ψ̃(1)` sits on a multiple of π: the counts with and without the
    /// endpoint zero.
    pub boundary: Option<[u64; 2]>,
}

/// Zeros of `x_2` on `(0, 1]`: the multiples of π in `(0, ψ̃(1)]`.
pub fn zero_count(f: &Potential) -> Result<ZeroCount> {
    let psi1 = integrate_monodromy(f, &MonodromyOptions::default())?.psi1;
    let q = psi1 / PI;
    let k = q.round();
    if k >= 1.0 && (psi1 - k * PI).abs() < 1e-8 {
        let k = k as u64;
        return Ok(ZeroCount {
            count: k,
            boundary: Some([k - 1, k]),
        });
    }
    Ok(ZeroCount {
        count: q.floor() as u64,
        boundary: None,
    })
}
