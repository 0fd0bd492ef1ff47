//! Invariants checked on randomized inputs.

mod common;

use std::f64::consts::PI;
use std::sync::OnceLock;

use common::{cone, flat, hyperbolic, k_zero, plane};
use proptest::prelude::*;
use vmplane::constructions::SmoothedConeResult;
use vmplane::geodesics::{trace_geodesic, turn_angle, GeodesicLaunch};
use vmplane::io::{read_profile_csv, write_profile_csv};
use vmplane::jacobi::sturm_compare;
use vmplane::oracle::{distance_shoot, turn_angle_by_trace};
use vmplane::{CurvatureSpec, PlaneProfile};

fn planes() -> &'static [PlaneProfile; 3] {
    static P: OnceLock<[PlaneProfile; 3]> = OnceLock::new();
    P.get_or_init(|| [flat(300.0), hyperbolic(12.0), k_zero(400.0)])
}

fn cone3() -> &'static SmoothedConeResult {
    static C: OnceLock<SmoothedConeResult> = OnceLock::new();
    C.get_or_init(|| cone(0.3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ku_family_matches_formula(u in 0.0..0.25f64, r in 0.0..1e3f64) {
        let k = CurvatureSpec::ku_family(u).eval(r).unwrap();
        let exact = 1.0 / (4.0 * (r + 1.0) * (r + 1.0)) - u;
        prop_assert!((k - exact).abs() <= 1e-15 * (1.0 + exact.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn jacobi_residual_is_small(which in 0usize..3, t in 0.0..1.0f64) {
        let p = &planes()[which];
        let r = t * p.r_max();
        let m = p.m(r);
        let residual = (p.mpp(r) + p.curvature(r) * m).abs();
        prop_assert!(residual <= 10.0 * p.tol() * (1.0 + m.abs()), "r {r}: {residual}");
    }

    #[test]
    fn turn_angle_is_monotone_on_nonnegative_curvature(a in 0.5..300.0f64, b in 0.5..300.0f64) {
        let c = cone3();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let t = |x: f64| turn_angle(&c.profile, &GeodesicLaunch::tangent(&c.profile, x).unwrap(), 1e-10).unwrap();
        let (tl, th) = (t(lo), t(hi));
        prop_assert!(tl.value <= th.value + tl.abs_error + th.abs_error, "T({lo}) = {} > T({hi}) = {}", tl.value, th.value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn trace_conserves_clairaut_and_speed(which in 0usize..3, r_q in 0.2..5.0f64, kappa in 0.05..3.0f64) {
        let p = &planes()[which];
        let launch = GeodesicLaunch::new(p, r_q, kappa).unwrap();
        let tr = trace_geodesic(p, &launch, 5.0, 1e-11).unwrap();
        let clairaut = tr
            .samples
            .iter()
            .map(|s| {
                let m = p.m(s.r);
                (s.theta_dot * m * m - launch.c).abs()
            })
            .fold(0.0, f64::max);
        prop_assert!(clairaut <= 1e-8, "{clairaut}");
        prop_assert!(tr.speed_drift(p) <= 1e-8);
    }

    #[test]
    fn trace_agrees_with_quadrature(which in 0usize..3, r_q in 0.3..4.0f64, kappa in 0.1..3.0f64) {
        let p = &planes()[which];
        let launch = GeodesicLaunch::new(p, r_q, kappa).unwrap();
        let q = turn_angle(p, &launch, 1e-10).unwrap();
        prop_assume!(q.value.is_finite());
        let t = turn_angle_by_trace(p, &launch, 4.0 * p.r_max(), 1e-10).unwrap();
        let allowed = 1e-6 + t.tail.abs_error + q.abs_error;
        prop_assert!((t.value - q.value).abs() <= allowed, "trace {} vs quadrature {}", t.value, q.value);
    }

    #[test]
    fn sturm_order_follows_curvature(u1 in 0.0..0.2f64, du in 0.0..0.05f64) {
        let p1 = plane(CurvatureSpec::ku_family(u1), 30.0);
        let p2 = plane(CurvatureSpec::ku_family(u1 + du), 30.0);
        let r = sturm_compare(&p1, &p2).unwrap();
        prop_assert!(r.m2_ge_m1 && r.mp2_ge_mp1, "{r:?}");
    }

    #[test]
    fn csv_round_trip(which in 0usize..3, t in 0.0..1.0f64) {
        let p = &planes()[which];
        let mut buf = Vec::new();
        write_profile_csv(p, 0.05, &mut buf).unwrap();
        let q = read_profile_csv(buf.as_slice(), 1e-11).unwrap();
        let r = t * p.r_max();
        prop_assert!((q.m(r) - p.m(r)).abs() <= 1e-6 * (1.0 + p.m(r)), "r {r}: {} vs {}", q.m(r), p.m(r));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn flat_shooting_matches_euclid(r_a in 0.5..4.0f64, r_b in 0.5..4.0f64, dtheta in 0.1..3.0f64) {
        let p = &planes()[0];
        let d = distance_shoot(p, (r_a, 0.0), (r_b, dtheta), 1e-8).unwrap();
        let exact = (r_a * r_a + r_b * r_b - 2.0 * r_a * r_b * dtheta.cos()).sqrt();
        prop_assert!((d.length - exact).abs() <= 1e-5, "{} vs {exact}", d.length);
    }

    #[test]
    fn hyperbolic_shooting_matches_law_of_cosines(r_a in 0.3..2.0f64, r_b in 0.3..2.0f64, dtheta in 0.1..PI) {
        let p = &planes()[1];
        let d = distance_shoot(p, (r_a, 0.0), (r_b, dtheta), 1e-8).unwrap();
        let exact = (r_a.cosh() * r_b.cosh() - r_a.sinh() * r_b.sinh() * dtheta.cos()).acosh();
        prop_assert!((d.length - exact).abs() <= 1e-5, "{} vs {exact}", d.length);
    }
}
