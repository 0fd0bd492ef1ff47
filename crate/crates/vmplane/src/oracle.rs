//! Brute-force checks that bypass the turn-angle quadrature: direct
//! integration of the geodesic equations and a shooting estimate of distance.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesics::{trace_until, GeodesicLaunch, TraceEnd};
use crate::jacobi::PlaneProfile;
use crate::quadrature::{integrate_f, IntegralResult, Status};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracedTurnAngle {
    /// θ swept by the trace plus the tail beyond its last radius.
    #[serde(with = "crate::io::ext_f64")]
    pub value: f64,
    /// θ swept by the traced part alone.
    pub traced: f64,
    /// Quadrature tail from the last traced radius to infinity.
    pub tail: IntegralResult,
    pub end: TraceEnd,
    pub turning_points: usize,
    /// The trace stayed bounded while θ kept growing.
    pub divergent: bool,
}

/// Turn angle from the geodesic equations: θ advance up to the window edge
/// (or to arclength `s_max`) plus the quadrature tail from there on.
pub fn turn_angle_by_trace(
    profile: &PlaneProfile,
    launch: &GeodesicLaunch,
    s_max: f64,
    tol: f64,
) -> Result<TracedTurnAngle> {
    if launch.kappa == PI {
        return Err(Error::ThroughOrigin);
    }
    let trace = trace_until(profile, launch, s_max, tol, None)?;
    let [r_e, rdot_e, theta_e] = trace.state_at(trace.s_end());
    let turning_points = trace.turning_points();
    let mut out = TracedTurnAngle {
        value: f64::INFINITY,
        traced: theta_e,
        tail: IntegralResult::divergent(Status::DivergentTail),
        end: trace.end,
        turning_points,
        divergent: true,
    };
    match trace.end {
        TraceEnd::ReachedOrigin { .. } => return Err(Error::ThroughOrigin),
        TraceEnd::Completed if rdot_e <= 0.0 || turning_points >= 2 => return Ok(out),
        _ if turning_points >= 2 => return Ok(out),
        _ => {}
    }
    let r_lo = r_e.min(profile.r_max());
    let tail = integrate_f(profile, launch.c, r_lo, f64::INFINITY, false, tol)?;
    out.tail = tail;
    if !tail.is_divergent() {
        out.value = theta_e + tail.value;
        out.divergent = false;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShootResult {
    /// Shortest connecting length found; +∞ when nothing connected.
    #[serde(with = "crate::io::ext_f64")]
    pub length: f64,
    /// Launch angle of the best connection (from the outward meridian at a,
    /// turning toward b); `None` for the meridian and through-origin cases.
    pub kappa: Option<f64>,
    /// Every connecting length found, in the order found.
    pub candidates: Vec<f64>,
    /// No connecting geodesic was found within the angle budget.
    pub failed: bool,
}

const SHOOT_GRID: usize = 240;

/// Length of the shortest geodesic found from `a` to `b`, each given as
/// (r, θ).
///
/// By reflection symmetry only the angular separation Δθ ∈ [0, π] matters.
/// Launch angles are scanned, each trace runs until θ has advanced by Δθ
/// (or by 2π − Δθ for the other way round), and sign changes of the radius
/// mismatch at that moment are bisected. A launch that leaves the window
/// before reaching the angle counts as overshooting.
pub fn distance_shoot(profile: &PlaneProfile, a: (f64, f64), b: (f64, f64), tol: f64) -> Result<ShootResult> {
    let r_max = profile.r_max();
    for (r, _) in [a, b] {
        if !(r >= 0.0 && r < r_max) {
            return Err(Error::Domain { r, lo: 0.0, hi: r_max });
        }
    }
    let (r_a, r_b) = (a.0, b.0);
    let mut dtheta = (b.1 - a.1).rem_euclid(TAU);
    if dtheta > PI {
        dtheta = TAU - dtheta;
    }
    let mut candidates = Vec::new();
    let mut best = (f64::INFINITY, None);
    if r_a == 0.0 || r_b == 0.0 || dtheta <= 1e-14 {
        // Meridian segment: |dr| ≤ ds along any curve, with equality here.
        let d = (r_a - r_b).abs();
        return Ok(ShootResult { length: d, kappa: None, candidates: vec![d], failed: false });
    }
    if PI - dtheta <= 1e-14 {
        candidates.push(r_a + r_b);
        best = (r_a + r_b, None);
    }
    let trace_tol = (tol * 1e-2).clamp(1e-12, 1e-7);
    let s_budget = 4.0 * (r_a + r_b) + 10.0;
    let kappas: Vec<f64> = (0..SHOOT_GRID).map(|i| 1e-3 + (PI - 2e-3) * i as f64 / (SHOOT_GRID - 1) as f64).collect();
    for target in [dtheta, TAU - dtheta] {
        // Radius mismatch and arclength when θ first reaches the target. A
        // trace leaving the window first has overshot r_b: +∞.
        let hit = |k: f64| -> Result<Option<(f64, f64)>> {
            let launch = GeodesicLaunch::new(profile, r_a, k)?;
            let tr = trace_until(profile, &launch, s_budget, trace_tol, Some(target))?;
            Ok(match tr.end {
                TraceEnd::ThetaReached { s } => Some((tr.state_at(s)[0] - r_b, s)),
                TraceEnd::WindowExit { .. } => Some((f64::INFINITY, f64::INFINITY)),
                _ => None,
            })
        };
        let mut prev: Option<(f64, f64)> = None;
        for &k in &kappas {
            let cur = hit(k)?;
            if let (Some((k0, d0)), Some((d1, _))) = (prev, cur) {
                if (d0 <= 0.0) != (d1 <= 0.0) {
                    if let Some((kk, s)) = refine(&hit, k0, d0, k, r_b, tol)? {
                        candidates.push(s);
                        if s < best.0 {
                            best = (s, Some(kk));
                        }
                    }
                }
            }
            prev = cur.map(|(d, _)| (k, d));
        }
    }
    Ok(ShootResult { length: best.0, kappa: best.1, failed: candidates.is_empty(), candidates })
}

// Bisects the launch angle on the sign of the mismatch; accepts the result
// only if the mismatch actually closes (a jump in the hit radius does not).
fn refine(
    hit: &impl Fn(f64) -> Result<Option<(f64, f64)>>,
    mut k0: f64,
    d0: f64,
    mut k1: f64,
    r_b: f64,
    tol: f64,
) -> Result<Option<(f64, f64)>> {
    let accept = tol.max(1e-9) * (1.0 + r_b);
    let mut last = None;
    for _ in 0..200 {
        let k = 0.5 * (k0 + k1);
        let Some((d, s)) = hit(k)? else { return Ok(None) };
        if d.is_finite() {
            last = Some((k, s, d));
            if d.abs() <= 1e-2 * accept {
                break;
            }
        }
        if (k1 - k0).abs() <= 1e-15 {
            break;
        }
        if (d <= 0.0) == (d0 <= 0.0) {
            k0 = k;
        } else {
            k1 = k;
        }
    }
    Ok(last.filter(|l| l.2.abs() <= accept).map(|(k, s, _)| (k, s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::CurvatureSpec;
    use crate::jacobi::solve_jacobi;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn traced_turn_angle_flat() {
        let p = solve_jacobi(&CurvatureSpec::constant(0.0), 100.0, 1e-11).unwrap();
        let l = GeodesicLaunch::tangent(&p, 1.0).unwrap();
        let t = turn_angle_by_trace(&p, &l, 500.0, 1e-10).unwrap();
        assert!((t.value - FRAC_PI_2).abs() < 1e-7, "{}", t.value);
    }

    #[test]
    fn flat_chord_and_meridian() {
        let p = solve_jacobi(&CurvatureSpec::constant(0.0), 20.0, 1e-11).unwrap();
        let d = distance_shoot(&p, (1.0, 0.0), (1.0, FRAC_PI_2), 1e-8).unwrap();
        assert!((d.length - 2f64.sqrt()).abs() < 1e-6, "{d:?}");
        let d = distance_shoot(&p, (1.0, 0.0), (3.0, 0.0), 1e-8).unwrap();
        assert_eq!(d.length, 2.0);
    }
}
