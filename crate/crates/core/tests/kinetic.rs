use std::sync::Arc;

use proptest::prelude::*;
use ravg::kinetic::*;
use ravg::numerics::BallRule;
use ravg::Vec3;

fn domain() -> SupportBox {
    SupportBox::cube_domain(1.0, 0.1, 0.75, 1.0).unwrap()
}

fn params() -> BumpParams {
    BumpParams {
        t_center: 0.45,
        t_halfwidth: 0.25,
        x_center: [0.05, -0.1, 0.0],
        x_radius: 0.35,
        p_center: [0.2, -0.1, 0.15],
        p_radius: 0.4,
        amplitude: 1.5,
    }
}

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, depth)
}

fn vel(p: &Vec3) -> Vec3 {
    let p0 = (1.0 + p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    [p[0] / p0, p[1] / p0, p[2] / p0]
}

fn duhamel_oracle(f: &dyn PhaseField, t: f64, x: &Vec3, p: &Vec3, damped: bool) -> f64 {
    let v = vel(p);
    let g = |s: f64| {
        let d = s - t;
        let y = [x[0] + v[0] * d, x[1] + v[1] * d, x[2] + v[2] * d];
        let w = if damped { d.exp() } else { 1.0 };
        w * f.eval(s, &y, p)
    };
    // split at the time-window edges so every piece is smooth
    let (a, b) = f.support().t_range;
    let mut cuts = vec![0.0, t];
    for c in [a, b] {
        if c > 0.0 && c < t {
            cuts.push(c);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2).map(|w| simpson(&g, w[0], w[1], 1e-13, 40)).sum()
}

fn points() -> Vec<(f64, Vec3, Vec3)> {
    vec![
        (0.4, [0.0, 0.0, 0.0], [0.2, -0.1, 0.15]),
        (0.55, [0.1, -0.05, 0.1], [0.3, 0.0, 0.2]),
        (0.7, [0.2, -0.1, 0.05], [0.1, -0.2, 0.1]),
        (0.95, [0.3, -0.2, 0.1], [0.35, -0.1, 0.25]),
        (0.3, [-0.2, 0.1, -0.1], [0.0, 0.0, 0.0]),
    ]
}

#[test]
fn duhamel_matches_adaptive_simpson() {
    let f = bump_field(&domain(), params()).unwrap().shared();
    for damped in [false, true] {
        let u = duhamel_solve(f.clone(), damped, 12).unwrap();
        for (t, x, p) in points() {
            let want = duhamel_oracle(f.as_ref(), t, &x, &p, damped);
            let got = u.eval(t, &x, &p);
            assert!((got - want).abs() <= 1e-8 * want.abs().max(1e-3), "damped={damped} t={t}: {got} vs {want}");
        }
    }
}

#[test]
fn duhamel_vanishes_before_the_source() {
    let f = bump_field(&domain(), params()).unwrap().shared();
    let u = duhamel_solve(f, false, 8).unwrap();
    assert_eq!(u.eval(0.15, &[0.0; 3], &[0.2, -0.1, 0.15]), 0.0);
    assert_eq!(u.eval(0.0, &[0.0; 3], &[0.2, -0.1, 0.15]), 0.0);
}

#[test]
fn radial_momentum_average() {
    let sup = domain();
    let g = FnField::new(|_, _, p: &Vec3| (-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2])).exp(), sup, Smoothness::Smooth);
    let want = 4.0 * std::f64::consts::PI * simpson(&|r: f64| r * r * (-r * r).exp(), 0.0, 1.0, 1e-14, 40);
    let ball = BallRule::new(1.0, 16, 8, 8).unwrap();
    let got = momentum_average(&g, 0.5, &[0.0; 3], &ball);
    assert!((got - want).abs() < 1e-12 * want, "{got} vs {want}");
}

#[test]
fn duhamel_is_linear_in_the_source() {
    let d = domain();
    let mut q = params();
    let a = bump_field(&d, q).unwrap().shared();
    q.x_center = [-0.1, 0.1, 0.05];
    q.p_center = [0.0, 0.1, -0.2];
    let b = bump_field(&d, q).unwrap().shared();
    let lc = LinearCombination::shared(vec![(2.0, a.clone()), (-0.5, b.clone())]).unwrap();
    let ua = duhamel_solve(a, true, 8).unwrap();
    let ub = duhamel_solve(b, true, 8).unwrap();
    let ul = duhamel_solve(lc, true, 8).unwrap();
    for (t, x, p) in points() {
        let want = 2.0 * ua.eval(t, &x, &p) - 0.5 * ub.eval(t, &x, &p);
        assert!((ul.eval(t, &x, &p) - want).abs() < 1e-14);
    }
}

#[test]
fn transported_pair_solution_is_the_profile() {
    for pair in transported_sources(&domain(), 3, 99).unwrap() {
        let u = duhamel_solve(pair.source(), false, 12).unwrap();
        let prof = pair.profile();
        let c = pair.params;
        let mut scale = 0.0f64;
        let mut worst = 0.0f64;
        for k in 0..40 {
            let s = k as f64 / 40.0;
            let t = c.t_center - c.t_halfwidth + 2.0 * c.t_halfwidth * s + 0.01;
            let x = [c.x_center[0] + 0.1 * (s - 0.5), c.x_center[1], c.x_center[2] - 0.05 * s];
            let p = [c.p_center[0] + 0.1 * s, c.p_center[1], c.p_center[2]];
            let want = prof.eval(t, &x, &p);
            scale = scale.max(want.abs());
            worst = worst.max((u.eval(t, &x, &p) - want).abs());
        }
        assert!(scale > 0.0);
        assert!(worst < 1e-9 * scale, "{worst} vs {scale}");
    }
}

#[test]
fn damped_solution_satisfies_its_equation() {
    let h = bump_field(&domain(), params()).unwrap().shared();
    let u = duhamel_solve(h.clone(), true, 12).unwrap();
    for (t, x, p) in points() {
        let r = damped_transport_residual(&u, h.as_ref(), &PhasePoint::new(t, x, p), 1e-3).unwrap();
        assert!(r.abs() < 1e-4, "t={t}: residual {r}");
    }
}

#[test]
fn residual_decays_at_second_order() {
    let f = bump_field(&domain(), params()).unwrap().shared();
    let u = duhamel_solve(f.clone(), false, 12).unwrap();
    let pt = PhasePoint::new(0.55, [0.1, -0.05, 0.1], [0.3, 0.0, 0.2]);
    let hs = [0.04, 0.02, 0.01];
    let r: Vec<f64> = hs.iter().map(|&h| transport_residual(&u, f.as_ref(), &pt, h).unwrap().abs()).collect();
    for w in r.windows(2) {
        let slope = (w[0] / w[1]).log2();
        assert!((slope - 2.0).abs() < 0.2, "slope {slope} from {r:?}");
    }
}

#[test]
fn average_does_not_depend_on_the_enclosing_ball() {
    let f = bump_field(&domain(), params()).unwrap().shared();
    let u = duhamel_solve(f, false, 12).unwrap();
    let tight = BallRule::new(0.75, 24, 24, 48).unwrap();
    let wide = BallRule::new(1.0, 24, 24, 48).unwrap();
    for (t, x, _) in points() {
        let a = momentum_average(&u, t, &x, &tight);
        let b = momentum_average(&u, t, &x, &wide);
        assert!((a - b).abs() <= 2e-3 * a.abs().max(b.abs()) + 1e-12, "t={t}: {a} vs {b}");
    }
}

#[test]
fn materialized_grid_matches_pointwise_average() {
    let pair = &transported_sources(&domain(), 1, 5).unwrap()[0];
    let spec = GridSpec::cube(10, 10).with_time_rule(12, 64).with_ball([6, 6, 12]);
    let grid = materialize_average(pair.source(), &spec, false).unwrap();
    let ball = BallRule::new(pair.source().support().p_radius, 6, 6, 12).unwrap();
    let prof = pair.profile();
    for flat in (0..grid.len()).step_by(97) {
        let (t, x) = grid.coords(flat);
        let want = momentum_average(prof.as_ref(), t, &x, &ball);
        assert!((grid.values[flat] - want).abs() < 1e-9 * grid.max_abs().max(1e-300));
    }
}

#[test]
fn zero_source_gives_zero_grid() {
    let z = ZeroField::shared(domain());
    let g = materialize_average(z, &GridSpec::cube(8, 8).with_ball([2, 2, 4]), true).unwrap();
    assert!(g.values.iter().all(|&v| v == 0.0));
}

fn arb_grid() -> impl Strategy<Value = AverageGrid4> {
    (
        prop::array::uniform4(2usize..5),
        prop::array::uniform4(-2.0f64..2.0),
        prop::array::uniform4(0.01f64..1.0),
        0.5f64..3.0,
        any::<bool>(),
    )
        .prop_flat_map(|(dims, origin, spacing, horizon, damped)| {
            let n = dims.iter().product::<usize>();
            prop::collection::vec(-1e3f64..1e3, n).prop_map(move |vals| {
                let mut g = AverageGrid4::zeros(dims, origin, spacing, horizon).unwrap();
                g.values = vals;
                g.meta.damped = damped;
                g
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn grid_files_round_trip(g in arb_grid()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.bin");
        write_grid(&g, &path).unwrap();
        let back = read_grid(&path).unwrap();
        prop_assert_eq!(back.dims, g.dims);
        prop_assert_eq!(back.origin, g.origin);
        prop_assert_eq!(back.spacing, g.spacing);
        prop_assert_eq!(back.values, g.values);
        prop_assert_eq!(back.meta.damped, g.meta.damped);
    }

    #[test]
    fn scaled_source_is_a_dilation(l in 1.0f64..1.8, s in 0.0f64..1.0) {
        let f: ScalarField7 = Arc::new(bump_field(&domain(), params()).unwrap());
        let fl = ScaledField::source(f.clone(), l).unwrap();
        let t = 0.25 + 0.4 * s;
        let x = [0.1 * s, -0.05, 0.02];
        let p = [0.2, -0.1, 0.15];
        let want = l * f.eval(l * t, &[l * x[0], l * x[1], l * x[2]], &p);
        prop_assert!((fl.eval(t, &x, &p) - want).abs() <= 1e-15 * want.abs().max(1.0));
    }
}
