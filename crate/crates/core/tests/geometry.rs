use std::f64::consts::PI;

use proptest::prelude::*;
use ravg::geometry::*;
use ravg::numerics::ball_volume;

/// `mes{p ∈ B_R : |g(p)| ≤ ε}` by a midpoint rule in cylindrical coordinates
/// `(p₁, ρ)` around `e`, with `g = |e| p₁ / √(1 + p₁² + ρ²) + e'`.
fn cylinder_measure(d: &Direction4, eps: f64, radius: f64, n: usize) -> f64 {
    let a = d.e_norm();
    let h1 = 2.0 * radius / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let p1 = -radius + (i as f64 + 0.5) * h1;
        let rho_max = (radius * radius - p1 * p1).sqrt();
        let h2 = rho_max / n as f64;
        for j in 0..n {
            let rho = (j as f64 + 0.5) * h2;
            let g = a * p1 / (1.0 + p1 * p1 + rho * rho).sqrt() + d.e_prime;
            if g.abs() <= eps {
                acc += 2.0 * PI * rho * h2 * h1;
            }
        }
    }
    acc
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

fn directions() -> Vec<Direction4> {
    vec![
        Direction4::normalized(0.1, [0.6, 0.2, -0.3]).unwrap(),
        Direction4::normalized(-0.4, [0.1, 0.8, 0.1]).unwrap(),
        Direction4::normalized(0.3, [0.0, 0.0, 1.0]).unwrap(),
        Direction4::normalized(0.0, [1.0, 1.0, 1.0]).unwrap(),
    ]
}

#[test]
fn slab_measure_matches_cylindrical_midpoint_rule() {
    for d in directions() {
        for eps in [0.05, 0.2, 0.5] {
            let want = cylinder_measure(&d, eps, 1.0, 1500);
            let quad = measure_slice_quadrature(&d, eps, 1.0).unwrap();
            assert!((quad - want).abs() < 3e-3 * want.max(1e-2), "{d:?} eps={eps}: {quad} vs {want}");
            let mc = measure_slice_mc(&SliceSet::new(d, eps, 1.0).unwrap(), 100_000, 17).unwrap();
            assert!((mc.value - quad).abs() < 4.0 * mc.std_error + 1e-9, "{} ± {} vs {quad}", mc.value, mc.std_error);
        }
    }
}

#[test]
fn weighted_integral_by_layer_cake() {
    let radius = 1.0;
    for d in directions() {
        let eps = 0.1;
        let gmax = d.e_norm() * radius / (1.0 + radius * radius).sqrt() + d.e_prime.abs();
        let m = |eta: f64| measure_slice_quadrature(&d, eta, radius).unwrap();
        let m_eps = m(eps);
        let body = simpson(|eta| 2.0 * eta.powi(-3) * (m(eta) - m_eps), eps, gmax, 2000);
        let want = body + (ball_volume(radius) - m_eps) / (gmax * gmax);
        let got = lemma4_integral_reduced(&d, eps, radius).unwrap();
        assert!((got / want - 1.0).abs() < 1e-4, "{d:?}: {got} vs {want}");
        let mc = lemma4_integral_mc(&d, eps, radius, 100_000, 3).unwrap();
        assert!((mc.value - got).abs() < 5.0 * mc.std_error, "{} ± {} vs {got}", mc.value, mc.std_error);
    }
}

#[test]
fn sampled_directions_are_uniform_on_the_sphere() {
    let dirs = sample_directions(20_000, 9);
    let n = dirs.len() as f64;
    let m2 = dirs.iter().map(|d| d.e_prime * d.e_prime).sum::<f64>() / n;
    assert!((m2 - 0.25).abs() < 0.01, "{m2}");
    let m1 = dirs.iter().map(|d| d.e[0]).sum::<f64>() / n;
    assert!(m1.abs() < 0.01);
    assert!(dirs.iter().all(|d| (d.e_prime * d.e_prime + d.e_norm().powi(2) - 1.0).abs() < 1e-12));
}

#[test]
fn slab_is_empty_below_the_threshold() {
    let radius = 1.0;
    for eps in [0.05, 0.2, 0.4] {
        let a = 0.9 * ep4_threshold_sharp(radius, eps);
        let d = Direction4::new((1.0 - a * a).sqrt(), [a, 0.0, 0.0]).unwrap();
        assert_eq!(measure_slice_quadrature(&d, eps, radius).unwrap(), 0.0);
        let mc = measure_slice_mc(&SliceSet::new(d, eps, radius).unwrap(), 10_000, 1).unwrap();
        assert_eq!(mc.hits, 0);
        // exact edge: √(1 - a²) - aR/√(1 + R²) = ε, by bisection
        let gap = |a: f64| (1.0 - a * a).sqrt() - a * radius / (1.0 + radius * radius).sqrt() - eps;
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if gap(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!(ep4_threshold_sharp(radius, eps) <= lo);
        for (scale, empty) in [(0.999, true), (1.001, false)] {
            let a = scale * lo;
            let d = Direction4::new((1.0 - a * a).sqrt(), [a, 0.0, 0.0]).unwrap();
            assert_eq!(measure_slice_quadrature(&d, eps, radius).unwrap() == 0.0, empty, "eps={eps} scale={scale}");
        }
    }
}

#[test]
fn slab_bound_covers_the_quadrature_measure() {
    let cr = c_r(1.0).unwrap();
    for d in sample_directions(50, 4) {
        for eps in [0.01, 0.1, 0.5] {
            let m = measure_slice_quadrature(&d, eps, 1.0).unwrap();
            assert!(m <= cr * eps + 1e-12, "{d:?} eps={eps}: {m}");
        }
    }
}

fn arb_direction() -> impl Strategy<Value = Direction4> {
    (-1.0f64..1.0, prop::array::uniform3(-1.0f64..1.0))
        .prop_filter("nonzero", |(_, e)| e.iter().map(|v| v * v).sum::<f64>() > 1e-3)
        .prop_map(|(ep, e)| Direction4::normalized(ep, e).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn measure_is_monotone_and_bounded(d in arb_direction(), e1 in 0.01f64..0.5, de in 0.0f64..0.5, r in 0.3f64..2.0) {
        let a = measure_slice_quadrature(&d, e1, r).unwrap();
        let b = measure_slice_quadrature(&d, e1 + de, r).unwrap();
        prop_assert!(a <= b + 1e-9);
        prop_assert!(b <= ball_volume(r) * (1.0 + 1e-9));
        prop_assert!(a >= 0.0);
    }

    #[test]
    fn measure_is_rotation_invariant(d in arb_direction(), seed in 0u64..1000, eps in 0.02f64..0.5) {
        let rot = random_rotation(seed);
        let a = measure_slice_quadrature(&d, eps, 1.0).unwrap();
        let b = measure_slice_quadrature(&d.rotated(&rot), eps, 1.0).unwrap();
        prop_assert!((a - b).abs() < 1e-12 * a.max(1.0));
        // the Monte-Carlo path sees the rotated slab directly
        let mc = measure_slice_mc(&SliceSet::new(d.rotated(&rot), eps, 1.0).unwrap(), 20_000, seed).unwrap();
        prop_assert!((mc.value - a).abs() < 5.0 * mc.std_error + 1e-9, "{} ± {} vs {a}", mc.value, mc.std_error);
    }
}
