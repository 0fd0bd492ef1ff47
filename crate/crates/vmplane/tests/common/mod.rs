#![allow(dead_code)]

use vmplane::constructions::{build_smoothed_cone, SmoothedConeResult};
use vmplane::{solve_jacobi, CurvatureSpec, Extrapolate, PlaneProfile, Table};

pub fn plane(spec: CurvatureSpec, r_max: f64) -> PlaneProfile {
    solve_jacobi(&spec, r_max, 1e-11).expect("plane builds")
}

pub fn flat(r_max: f64) -> PlaneProfile {
    plane(CurvatureSpec::constant(0.0), r_max)
}

pub fn hyperbolic(r_max: f64) -> PlaneProfile {
    plane(CurvatureSpec::constant(-1.0), r_max)
}

/// m = ln(r+1)√(r+1).
pub fn k_zero(r_max: f64) -> PlaneProfile {
    plane(CurvatureSpec::ku_family(0.0), r_max)
}

pub fn cone(s: f64) -> SmoothedConeResult {
    build_smoothed_cone(s, 1e-9).expect("cone builds")
}

/// The paraboloid z = x² + y² as a curvature table in arclength from the
/// vertex: at profile radius ρ, s = ρ√(1+4ρ²)/2 + asinh(2ρ)/4 and
/// K = 4/(1+4ρ²)². Its m grows like √s, so ∫m⁻² diverges.
pub fn paraboloid_table() -> CurvatureSpec {
    let mut rho: Vec<f64> = vec![0.0];
    let mut x: f64 = 0.0;
    while x < 45.0 {
        x = if x < 1.0 { x + 0.01 } else { x * 1.002 };
        rho.push(x);
    }
    let s: Vec<f64> = rho.iter().map(|&p| 0.5 * p * (1.0 + 4.0 * p * p).sqrt() + (2.0 * p).asinh() / 4.0).collect();
    let k: Vec<f64> = rho.iter().map(|&p| 4.0 / (1.0 + 4.0 * p * p).powi(2)).collect();
    CurvatureSpec::Table(Table::new(s, k, Extrapolate::None).expect("valid table"))
}

/// Profile radius ρ at arclength s on the paraboloid (the exact m).
pub fn paraboloid_m(s: f64) -> f64 {
    let arc = |p: f64| 0.5 * p * (1.0 + 4.0 * p * p).sqrt() + (2.0 * p).asinh() / 4.0;
    let (mut lo, mut hi) = (0.0, s.max(1.0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if arc(mid) < s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
