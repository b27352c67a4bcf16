use std::f64::consts::PI;

use proptest::prelude::*;
use ravg::bounds::*;
use ravg::kinetic::*;
use ravg::Error;

fn small_resources() -> Resources {
    let mut res = Resources::new(1.0, GridSpec::cube(12, 12).with_time_rule(12, 64).with_ball([4, 4, 8]));
    res.phase_points = 1 << 12;
    res.pair_points = 1 << 13;
    res
}

fn domain() -> SupportBox {
    SupportBox::cube_domain(1.0, 0.1, 0.75, 1.0).unwrap()
}

#[test]
fn constants_recomputed_from_closed_forms() {
    for &(t, r, q) in &[(1.0, 1.0, 2.0), (0.5, 0.3, 1.5), (3.0, 2.0, 4.0), (1.0, 0.1, 10.0)] {
        let c = constants(t, r, q).unwrap();
        let vol = 4.0 / 3.0 * PI * r * r * r;
        let cr = f64::max(8.0 * PI * r * r * r / 3.0, 16.0 * r * (1.0 + r * r) * (1.0 + r * r).sqrt());
        let hold = ((q - 1.0) / q).powf((q - 1.0) / q);
        let c5 = (6.0 * (1.0 + t / 2.0) * cr).sqrt();
        let want = [
            hold * (1.0 - (-t).exp()),
            vol.powf(1.0 - 1.0 / q) * t.powf(1.0 / q) * hold,
            t,
            vol * t,
            c5,
            vol.max(t).max(vol * t).max(c5),
            cr,
        ];
        let got = [c.c1, c.c2, c.c3, c.c4, c.c5, c.c6, c.c_r];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= 1e-12 * w, "(T,R,q)=({t},{r},{q}): {got:?} vs {want:?}");
        }
        assert_eq!(lq_constant(t, r, 1.0).unwrap(), t);
        assert_eq!(lq_constant(t, r, q).unwrap(), c.c2);
        assert_eq!(lq_constant(t, r, f64::INFINITY).unwrap(), c.c4);
    }
}

#[test]
fn zero_field_passes_every_check() {
    let res = small_resources();
    let z = ZeroField::shared(domain());
    let l2 = check_lemma2(z.clone(), &res).unwrap();
    assert!(l2.pass && l2.lhs == 0.0);
    let t1 = check_theorem1(z.clone(), 0.2, 3.0, &res).unwrap();
    assert!(t1.pass && t1.lhs == 0.0);
    for q in [1.0, 2.0, f64::INFINITY] {
        let r = check_lq_bound(z.clone(), q, &res).unwrap();
        assert!(r.pass && r.lhs == 0.0);
    }
}

#[test]
fn inadmissible_exponents_are_rejected() {
    let res = small_resources();
    let z = ZeroField::shared(domain());
    for (s, p) in [(0.5, 2.0), (0.0, 3.0), (0.4, 3.0), (0.1, 1.0)] {
        assert!(matches!(check_theorem1(z.clone(), s, p, &res), Err(Error::Inadmissible { .. })), "({s},{p})");
    }
    assert!(admissible_s(1.0).is_err());
    let (lo, hi) = admissible_s(4.0).unwrap();
    assert_eq!((lo, hi), (0.0, 0.25));
}

#[test]
fn bump_checks_hold_on_a_small_grid() {
    let res = small_resources();
    let pair = &transported_sources(&domain(), 1, 11).unwrap()[0];
    let f = pair.source();
    let l2 = check_lemma2(f.clone(), &res).unwrap();
    assert!(l2.pass && l2.lhs > 0.0, "{l2:?}");
    let t1 = check_theorem1(f.clone(), 0.2, 3.0, &res).unwrap();
    assert!(t1.pass && t1.lhs > 0.0, "{t1:?}");
    let b = bump_sources(&domain(), 1, 11).unwrap().remove(0).shared();
    for q in [1.0, 2.0, 4.0, f64::INFINITY] {
        let r = check_lq_bound(b.clone(), q, &res).unwrap();
        assert!(r.pass && r.lhs > 0.0, "{r:?}");
    }
}

#[test]
fn split_pieces_and_cross_term_sum_to_the_unsplit_norm() {
    let pair = &transported_sources(&domain(), 1, 2024).unwrap()[0];
    let spec = GridSpec::cube(12, 12).with_time_rule(16, 128).with_ball([2, 4, 4]);
    let d = fourier_split_diag(pair.source(), None, &spec, 2, 1.0).unwrap();
    assert!(d.unsplit > 0.0);
    assert!((d.i1 + d.i2 + d.cross - d.unsplit).abs() < 1e-10 * d.unsplit, "{d:?}");
    assert!(d.i1 <= d.bound1 && d.i2 <= d.bound2);
    assert!(d.unsplit <= 2.0 * (d.i1 + d.i2) * (1.0 + 1e-12));
    assert_eq!(d.alpha, balanced_alpha(d.a, d.b));
    let forced = fourier_split_diag(pair.source(), Some(3.0 * d.alpha), &spec, 2, 1.0).unwrap();
    assert_eq!(forced.alpha, 3.0 * d.alpha);
    assert!((forced.unsplit - d.unsplit).abs() < 1e-12 * d.unsplit);
}

#[test]
fn split_refuses_oversized_grids() {
    let pair = &transported_sources(&domain(), 1, 2024).unwrap()[0];
    let wide = GridSpec::cube(MAX_SPLIT_AXIS + 1, 12).with_ball([2, 4, 4]);
    assert!(matches!(fourier_split_diag(pair.source(), None, &wide, 2, 1.0), Err(Error::CostGuard(_))));
    let heavy = GridSpec::cube(12, 12).with_ball([4, 4, 8]);
    assert!(matches!(fourier_split_diag(pair.source(), None, &heavy, 2, 1.0), Err(Error::CostGuard(_))));
}

#[test]
fn scaling_exponents_on_a_small_grid() {
    let wide = SupportBox::cube_domain(1.0, 0.1, 3.0, 1.0).unwrap();
    let params = BumpParams {
        t_center: 0.4,
        t_halfwidth: 0.12,
        x_center: [0.0; 3],
        x_radius: 0.3,
        p_center: [0.1, 0.0, -0.1],
        p_radius: 0.3,
        amplitude: 1.0,
    };
    let f = TransportPair::new(&wide, params, 0.5).unwrap().source();
    let res = small_resources();
    let rep = scaling_experiment(f, &[0.8, 1.0, 1.25], 0.5, 2.0, ScalingFrame::Covariant, &res).unwrap();
    let ratios = rep.ratios().unwrap();
    assert_eq!(ratios[1], 1.0);
    assert_eq!(rep.seminorm, "fourier");
    assert!((rep.slope - rep.target).abs() < 1e-6, "{rep:?}");
    assert!((rep.lp_slope - rep.lp_target).abs() < 1e-6, "{rep:?}");
    assert_eq!(rep.target, 0.5 - 2.0);
    assert!(rep.reports(0.05).iter().all(|r| r.pass));
}

#[test]
fn loglog_slope_of_a_power_law() {
    let x = [0.5, 0.8, 1.0, 1.3, 2.0];
    let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-1.75)).collect();
    assert!((loglog_slope(&x, &y) + 1.75).abs() < 1e-12);
}

fn diag(a: f64, b: f64, alpha: f64) -> SplitDiagnostic {
    SplitDiagnostic {
        i1: 0.0,
        i2: 0.0,
        unsplit: 0.0,
        cross: 0.0,
        a,
        b,
        alpha,
        c_r: 45.25,
        bound1: 0.0,
        bound2: 0.0,
        momenta: 1,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interpolation_exponents_are_coherent(q in 1.0f64..20.0, theta in 0.0f64..1.0) {
        let (p, s) = interpolation_params(q, theta).unwrap();
        prop_assert!((1.0 / p - ((1.0 - theta) / q + theta / 2.0)).abs() < 1e-12);
        prop_assert_eq!(s, theta / 2.0);
        // p lies between q and 2
        prop_assert!(p >= q.min(2.0) * (1.0 - 1e-12) && p <= q.max(2.0) * (1.0 + 1e-12));
        let (p_inf, _) = interpolation_params(f64::INFINITY, theta.max(1e-3)).unwrap();
        prop_assert!((p_inf - 2.0 / theta.max(1e-3)).abs() < 1e-9 * p_inf);
    }

    #[test]
    fn balanced_alpha_beats_its_neighbours(a in 1e-6f64..1e3, b in 1e-6f64..1e3, k in 0.05f64..20.0) {
        let alpha = balanced_alpha(a, b);
        let d = diag(a, b, alpha);
        let at = d.combined_bound(alpha);
        prop_assert!(at <= d.combined_bound(2.0 * alpha).min(d.combined_bound(0.5 * alpha)) * (1.0 + 1e-12));
        prop_assert!((at - 3.0 * d.c_r * (a * b).sqrt()).abs() < 1e-10 * at);
        // the true minimiser is √(2B/A), worth 2√2·C_R·√(AB)
        let best = (2.0 * b / a).sqrt();
        prop_assert!(d.combined_bound(best) <= d.combined_bound(k * best) * (1.0 + 1e-12));
        prop_assert!((d.combined_bound(best) - 2.0 * 2f64.sqrt() * d.c_r * (a * b).sqrt()).abs() < 1e-10 * at);
        prop_assert!(d.reports().iter().find(|r| r.name == "split/argmin").unwrap().pass);
    }

    #[test]
    fn report_pass_rule(lhs in -1e3f64..1e3, rhs in -1e3f64..1e3, err in 0.0f64..10.0) {
        let r = BoundReport::new("x", lhs, rhs, err);
        prop_assert_eq!(r.pass, lhs <= rhs + 3.0 * err);
        prop_assert_eq!(r.net_margin(), rhs + 3.0 * err - lhs);
        prop_assert_eq!(r.margin, rhs - lhs);
    }
}
