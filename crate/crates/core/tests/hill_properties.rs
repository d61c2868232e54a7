use std::f64::consts::PI;

use hillproj_core::cover::{classify_cover, CoverClass};
use hillproj_core::hill::{
    builtin_potentials, classify_potential, developing_map, gauge_transform, gauge_transform_local,
    integrate_monodromy, projective_parametrization, Development, Diffeo, DiffeoMode,
    Jet, MonodromyOptions, Source,
};
use hillproj_core::{Mat2, Potential};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `c0 + Σ a_m cos 2πmt + b_m sin 2πmt`, `m ≤ 3`.
fn trig_polynomial(rng: &mut ChaCha8Rng) -> Potential {
    let c0: f64 = rng.gen_range(-3.0..40.0);
    let coef: Vec<(f64, f64)> = (0..3)
        .map(|_| (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
        .collect();
    Potential::from_fn(
        move |t| {
            c0 + coef
                .iter()
                .enumerate()
                .map(|(m, (a, b))| {
                    let w = 2.0 * PI * (m + 1) as f64 * t;
                    a * w.cos() + b * w.sin()
                })
                .sum::<f64>()
        },
        1.0,
        Source::Function,
    )
    .unwrap()
}

/// `t + ε sin 2πt` with exact derivatives.
fn wobble(eps: f64) -> Diffeo {
    Diffeo::with_jet(
        move |t| {
            let w = 2.0 * PI;
            let (s, c) = (w * t).sin_cos();
            Jet {
                value: t + eps * s,
                d1: 1.0 + eps * w * c,
                d2: -eps * w * w * s,
                d3: -eps * w * w * w * c,
            }
        },
        DiffeoMode::CircleLift,
    )
}

fn parameter(c: &CoverClass) -> f64 {
    match *c {
        CoverClass::HypK { lambda, .. } => lambda,
        CoverClass::EllAlpha { alpha } => alpha,
        _ => 0.0,
    }
}

#[test]
fn gauge_equivariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let opts = MonodromyOptions::with_tol(1e-12);
    let mut checked = 0;
    while checked < 20 {
        let f = trig_polynomial(&mut rng);
        let eps = rng.gen_range(-0.12..0.12);
        let m = integrate_monodromy(&f, &opts).unwrap();
        if (m.matrix.trace().abs() - 2.0).abs() < 1e-4 {
            continue;
        }
        let g = gauge_transform(&f, &wobble(eps)).unwrap();
        let a = classify_cover(&m.cover).unwrap();
        let b = classify_cover(&integrate_monodromy(&g, &opts).unwrap().cover).unwrap();
        assert_eq!((a.kind(), a.k()), (b.kind(), b.k()), "{a} vs {b}");
        assert!((parameter(&a) - parameter(&b)).abs() < 1e-6, "{a} vs {b}");
        checked += 1;
    }
}

#[test]
fn determinant_is_conserved() {
    for (name, f) in builtin_potentials() {
        let m = integrate_monodromy(&f, &MonodromyOptions::with_tol(1e-10)).unwrap();
        assert!(m.det_drift < 1e-9, "{name}: drift {:e}", m.det_drift);
        assert!((m.matrix.det() - 1.0).abs() <= 1e-12);
        assert!(m.lift_defect < 1e-8, "{name}: {:e}", m.lift_defect);
    }
}

#[test]
fn schwarzian_of_developing_map() {
    for (name, f) in builtin_potentials().into_iter().take(5) {
        let dev = Development::new(&f, -0.1, 1.1, 1e-13).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            let s = dev.chart_schwarzian(t).unwrap();
            worst = worst.max((s - 2.0 * f.eval(t)).abs());
        }
        assert!(worst < 1e-4, "{name}: sup error {worst:e}");
    }
}

#[test]
fn projective_parametrization_flattens() {
    for (name, f) in builtin_potentials() {
        let phi = projective_parametrization(&f, 0.3).unwrap();
        let DiffeoMode::Interval { lo, hi } = phi.mode() else { unreachable!() };
        let flat = gauge_transform_local(&f, &phi).unwrap();
        for i in 1..10 {
            let s = lo + (hi - lo) * i as f64 / 10.0;
            assert!(flat.eval(s).abs() < 1e-6, "{name}: {}", flat.eval(s));
        }
    }
}

#[test]
fn constant_potentials_rotate() {
    for omega in [0.3, 1.0, 2.5, PI - 0.01, 4.0, 7.5] {
        let c = classify_potential(&Potential::constant(omega * omega)).unwrap();
        let CoverClass::EllAlpha { alpha } = c else { panic!("{c}") };
        assert!((alpha - omega).abs() < 1e-8, "{omega}: {alpha}");
    }
    for n in 1..=3 {
        let w = n as f64 * PI;
        let m = integrate_monodromy(&Potential::constant(w * w), &MonodromyOptions::default()).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let expected = Mat2::new(sign, 0.0, 0.0, sign).unwrap();
        assert!(m.matrix.distance(&expected) < 1e-8);
        assert_eq!(classify_cover(&m.cover).unwrap(), CoverClass::CentralK { k: n });
    }
}

#[test]
fn period_rescaling_preserves_class() {
    for (c, period) in [(1.0, 2.0), (-0.3, 0.5), (3.0, 1.7)] {
        let a = classify_potential(&Potential::from_fn(move |_| c, period, Source::Function).unwrap()).unwrap();
        let b = classify_potential(&Potential::constant(c * period * period)).unwrap();
        assert!(a.approx_eq(&b, 1e-9), "{a} vs {b}");
    }
}

#[test]
fn developing_map_is_increasing() {
    for (name, f) in builtin_potentials() {
        let d = developing_map(&f, 3.0, 50).unwrap();
        assert!(d.windows(2).all(|w| w[1].1 > w[0].1), "{name}");
    }
}

/// Classical fixed-step RK4 for `x'' = -F x`, `x(0) = 0`, `x'(0) = 1`,
/// counting sign changes of `x` on `(0, 1]`.
fn sign_changes(f: &Potential, steps: usize) -> u64 {
    let h = 1.0 / steps as f64;
    let rhs = |t: f64, (x, v): (f64, f64)| (v, -f.eval(t) * x);
    let (mut x, mut v) = (0.0, 1.0);
    let mut count = 0;
    for i in 0..steps {
        let t = i as f64 * h;
        let k1 = rhs(t, (x, v));
        let k2 = rhs(t + h / 2.0, (x + h / 2.0 * k1.0, v + h / 2.0 * k1.1));
        let k3 = rhs(t + h / 2.0, (x + h / 2.0 * k2.0, v + h / 2.0 * k2.1));
        let k4 = rhs(t + h, (x + h * k3.0, v + h * k3.1));
        let xn = x + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        v += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        if i > 0 && xn * x < 0.0 || (xn == 0.0 && i + 1 == steps) {
            count += 1;
        }
        x = xn;
    }
    count
}

#[test]
fn zero_count_matches_sign_changes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let f = trig_polynomial(&mut rng);
        let z = hillproj_core::hill::zero_count(&f).unwrap();
        assert!(z.boundary.is_none());
        assert_eq!(z.count, sign_changes(&f, 20_000));
    }
}

#[test]
fn developing_map_is_equivariant() {
    for (name, f) in builtin_potentials() {
        let m = integrate_monodromy(&f, &MonodromyOptions::with_tol(1e-12)).unwrap();
        let d = developing_map(&f, 2.0, 9).unwrap();
        for i in 0..4 {
            let (t, psi) = d[i];
            let (t1, psi1) = d[i + 4];
            assert!((t1 - t - 1.0).abs() < 1e-12);
            assert!((m.cover.evaluate(psi) - psi1).abs() < 1e-7, "{name} at {t}");
        }
    }
}

#[test]
fn monodromy_is_positive() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..30 {
        let c = classify_potential(&trig_polynomial(&mut rng)).unwrap();
        assert!(hillproj_core::cover::is_positive(&c), "{c}");
    }
}

#[test]
fn constant_potentials_are_never_obstructed() {
    for i in 0..50 {
        let c = -5.0 + 45.0 * i as f64 / 49.0;
        let y = hillproj_core::report::yamabe_obstruction(&Potential::constant(c)).unwrap();
        assert!(!y.obstructed, "{c}: {}", y.cls);
    }
}
