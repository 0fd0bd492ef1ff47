//! Builders for the named planes: smoothed cones of prescribed terminal
//! slope, and the two planes showing a disconnected critical set.

use std::f64::consts::PI;

use crate::analysis::{critical_ball_radius, Radius};
use crate::curvature::{check_von_mangoldt, ku_zero, CurvatureSpec, DropParams};
use crate::error::{Error, Result};
use crate::geodesics::{turn_angle, GeodesicLaunch};
use crate::jacobi::{solve_jacobi, PlaneProfile, DEFAULT_TOL};
use crate::quadrature::integrate_f;

#[derive(Clone, Debug)]
pub struct SmoothedConeResult {
    pub profile: PlaneProfile,
    /// Parameter of K_u = 1/(4(r+1)²) − u.
    pub u: f64,
    /// Half-width of the smoothing window around the zero z_u of K_u.
    pub epsilon: f64,
    /// z_u + ε; K vanishes and m' is constant from here on.
    pub rho: f64,
    pub achieved_slope: f64,
    pub iterations: usize,
}

const CONE_ITERATIONS: usize = 60;
const EPS_RETRIES: usize = 8;
const U_FLOOR: f64 = 1e-10;

fn default_epsilon(u: f64, scale: f64) -> f64 {
    (0.1f64).min(ku_zero(u) / 10.0) * scale
}

fn m_zero(r: f64) -> f64 {
    (r + 1.0).ln() * (r + 1.0).sqrt()
}

/// A plane with K ≥ 0 non-increasing, K = 0 from ρ on and m' = s there.
///
/// The curvature is max(K_u, 0) with the corner at z_u smoothed over
/// [z_u − ε, z_u + ε]. The terminal slope increases continuously from 0 to 1
/// as u runs over (0, 1/4), so u is found by bisection on log u. If the
/// monotonicity or the comparison m ≥ ln(r+1)√(r+1) fails, ε is halved and
/// the search repeated.
pub fn build_smoothed_cone(s: f64, tol: f64) -> Result<SmoothedConeResult> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::InvalidInput(format!("cone slope must lie in (0, 1], got {s}")));
    }
    if !(1e-11..1e-2).contains(&tol) {
        return Err(Error::InvalidInput(format!("cone tolerance must lie in [1e-11, 1e-2), got {tol}")));
    }
    if s == 1.0 {
        let profile = solve_jacobi(&CurvatureSpec::constant(0.0), 100.0, DEFAULT_TOL)?;
        return Ok(SmoothedConeResult { profile, u: 0.25, epsilon: 0.0, rho: 0.0, achieved_slope: 1.0, iterations: 0 });
    }
    let solver_tol = (tol * 1e-3).clamp(1e-13, 1e-11);
    let mut last_err = None;
    let mut scale = 1.0;
    for _ in 0..EPS_RETRIES {
        match cone_search(s, tol, solver_tol, scale) {
            Ok(res) => return Ok(res),
            Err(e @ Error::Construction(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
        scale *= 0.5;
    }
    Err(last_err.unwrap_or_else(|| Error::Construction("smoothed cone search failed".into())))
}

fn slope_at_rho(u: f64, scale: f64, solver_tol: f64) -> Result<(f64, f64)> {
    let eps = default_epsilon(u, scale);
    let rho = ku_zero(u) + eps;
    let p = solve_jacobi(&CurvatureSpec::smoothed_ku(u, eps), rho, solver_tol)?;
    Ok((p.mp(rho), eps))
}

fn cone_search(s: f64, tol: f64, solver_tol: f64, scale: f64) -> Result<SmoothedConeResult> {
    // Bracket on log u: slope(lo) < s < slope(hi).
    let mut hi = (0.25f64 * (1.0 - 1e-9)).ln();
    if slope_at_rho(hi.exp(), scale, solver_tol)?.0 < s {
        return Err(Error::Construction(format!("slope {s} is beyond reach of the u-family")));
    }
    let mut lo = (1e-2f64).ln();
    while slope_at_rho(lo.exp(), scale, solver_tol)?.0 >= s {
        hi = lo;
        lo -= 10f64.ln();
        if lo.exp() < U_FLOOR {
            return Err(Error::Construction(format!("slope {s} needs u below {U_FLOOR:e}; window too large")));
        }
    }
    let mut best = None;
    let mut iterations = 0;
    for it in 0..CONE_ITERATIONS {
        iterations = it + 1;
        let mid = 0.5 * (lo + hi);
        let (slope, _) = slope_at_rho(mid.exp(), scale, solver_tol)?;
        best = Some((mid.exp(), slope));
        if (slope - s).abs() <= 0.5 * tol {
            break;
        }
        if slope < s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (u, slope) = best.expect("at least one iteration");
    if (slope - s).abs() > tol {
        return Err(Error::Construction(format!(
            "slope {s} not reached within {CONE_ITERATIONS} iterations; bracket u in [{:e}, {:e}], last slope {slope}",
            lo.exp(),
            hi.exp()
        )));
    }
    let eps = default_epsilon(u, scale);
    let rho = ku_zero(u) + eps;
    let r_max = rho + rho.max(100.0);
    let spec = CurvatureSpec::smoothed_ku(u, eps);
    let vm = check_von_mangoldt(&spec, r_max, (eps / 4.0).min(0.5))?;
    if !vm.is_vm {
        return Err(Error::Construction(format!(
            "smoothing with epsilon {eps} is not monotone near {:?}",
            vm.first_violation
        )));
    }
    let profile = solve_jacobi(&spec, r_max, solver_tol)?;
    // Sturm guard: K ≤ K_0 forces m ≥ m_0.
    for r in profile.sample_points(0.0, r_max) {
        if profile.m(r) < m_zero(r) * (1.0 - 1e-9) - 1e-12 {
            return Err(Error::Construction(format!("comparison m >= m_0 fails at r = {r} with epsilon {eps}")));
        }
    }
    let (_, lo_mp) = profile.min_mp(rho, r_max);
    let (_, hi_mp) = profile.max_mp(rho, r_max);
    if hi_mp - lo_mp > 1e-8 {
        return Err(Error::Construction(format!("m' varies by {} beyond rho", hi_mp - lo_mp)));
    }
    Ok(SmoothedConeResult { achieved_slope: profile.mp(rho), profile, u, epsilon: eps, rho, iterations })
}

/// Default drop for the sphere-cap example: deep and narrow enough that m
/// turns around before reaching zero.
pub const MPRIME_ZERO_DEFAULT_DROP: DropParams = DropParams { depth: 5.0, width: 0.5 };

/// K = 1 on [0, a] (so m = sin r and m'(π/2) = 0), then a smooth drop to
/// 1 − μ. The drop must stop m before it reaches zero and keep it growing.
pub fn build_example_mprime_zero(a: f64, drop: DropParams, r_max: f64) -> Result<PlaneProfile> {
    if !(a > PI / 2.0 && a < PI) {
        return Err(Error::InvalidInput(format!("splice radius must lie in (pi/2, pi), got {a}")));
    }
    let spec = CurvatureSpec::spliced(CurvatureSpec::constant(1.0), a, drop);
    let profile = match solve_jacobi(&spec, r_max, DEFAULT_TOL) {
        Ok(p) => p,
        Err(Error::StarViolation { first_zero }) => {
            return Err(Error::Construction(format!(
                "drop depth {} width {} does not stop m: it reaches zero at r = {first_zero}; use a deeper or narrower drop",
                drop.depth, drop.width
            )))
        }
        Err(e) => return Err(e),
    };
    let worst = profile.sample_points(0.0, a).into_iter().map(|r| (profile.m(r) - r.sin()).abs()).fold(0.0, f64::max);
    if worst > 1e-8 {
        return Err(Error::Construction(format!("m departs from sin r by {worst} before the splice")));
    }
    let (_, tail_min) = profile.min_m(a, r_max);
    if !(tail_min > 0.0 && profile.mp(r_max) > 0.0) {
        return Err(Error::Construction(format!(
            "m has no positive lower bound after the drop (min {tail_min}, final slope {})",
            profile.mp(r_max)
        )));
    }
    Ok(profile)
}

#[derive(Clone, Debug)]
pub struct DisconnectedExample {
    pub profile: PlaneProfile,
    pub base: SmoothedConeResult,
    /// Radius that is not critical on either plane.
    pub r_q: f64,
    /// Splice radius, where ∫_{r_q}^R F_{m(r_q)} first exceeds π (plus margin).
    pub splice: f64,
    /// ∫_{r_q}^R F_{m(r_q)} on the base.
    pub partial_integral: f64,
}

pub const DISCONNECTED_DEFAULT_DROP: DropParams = DropParams { depth: 2.0, width: 1.0 };
const PARTIAL_MARGIN: f64 = 0.02;

/// A plane with m' > 0 whose critical set is disconnected.
///
/// Starting from a smoothed cone of slope below 1/2, take r_q with
/// T(γ_q) > π (default 1.5·R_m), march R until ∫_{r_q}^R F_{m(r_q)} > π and
/// splice a negative-curvature drop at R. The part of γ_q before R is
/// unchanged, so r_q stays non-critical, while the far region becomes
/// hyperbolic and critical again.
pub fn build_example_disconnected_positive_mprime(
    s_base: f64,
    r_q: Option<f64>,
    drop: DropParams,
    tol: f64,
) -> Result<DisconnectedExample> {
    if !(s_base > 0.0 && s_base < 0.5) {
        return Err(Error::InvalidInput(format!("base slope must lie in (0, 1/2), got {s_base}")));
    }
    let base = build_smoothed_cone(s_base, tol.max(1e-10))?;
    let r_m = match critical_ball_radius(&base.profile, tol)? {
        Radius::Finite { estimate, .. } => estimate,
        other => {
            return Err(Error::Construction(format!("base plane has critical ball {other:?}; no non-critical radius")))
        }
    };
    let r_q = r_q.unwrap_or(1.5 * r_m);
    if !(r_q > r_m && r_q < base.profile.r_max()) {
        return Err(Error::Construction(format!("r_q = {r_q} is not in the non-critical range ({r_m}, window)")));
    }
    let t = turn_angle(&base.profile, &GeodesicLaunch::tangent(&base.profile, r_q)?, 0.1 * tol)?;
    if !(t.is_divergent() || t.value > PI + tol) {
        return Err(Error::Construction(format!("r_q = {r_q} is critical on the base plane (T = {})", t.value)));
    }
    // Extend the base window until the partial integral clears π.
    let mut window = base.profile.r_max();
    let c = base.profile.m(r_q);
    let mut base_profile = base.profile.clone();
    let (splice, partial) = loop {
        if let Some(found) = march_partial(&base_profile, c, r_q, tol)? {
            break found;
        }
        window *= 2.0;
        if window > 1e6 {
            return Err(Error::Construction(format!("partial integral from r_q = {r_q} stays below pi up to r = 1e6")));
        }
        base_profile = solve_jacobi(base_profile.spec(), window, base_profile.tol())?;
    };
    let spec = CurvatureSpec::spliced(base_profile.spec().clone(), splice, drop);
    let r_max = splice + drop.width + 12.0;
    let profile = solve_jacobi(&spec, r_max, base_profile.tol())?;
    let (at, min_mp) = profile.min_mp(0.0, r_max);
    if !(min_mp > 0.0) {
        return Err(Error::Construction(format!("m' = {min_mp} at r = {at} is not positive")));
    }
    Ok(DisconnectedExample { profile, base, r_q, splice, partial_integral: partial })
}

fn march_partial(profile: &PlaneProfile, c: f64, r_q: f64, tol: f64) -> Result<Option<(f64, f64)>> {
    let r_max = profile.r_max();
    let mut r = r_q;
    let mut h = 0.5;
    let mut acc = 0.0;
    let mut first = true;
    while r < r_max {
        let next = (r + h).min(r_max);
        let piece = integrate_f(profile, c, r, next, first, 0.1 * tol)?;
        if piece.is_divergent() {
            return Err(Error::Construction(format!("partial integral diverges near r = {r}")));
        }
        first = false;
        acc += piece.value;
        r = next;
        if acc > PI + PARTIAL_MARGIN {
            return Ok(Some((r, acc)));
        }
        h = (h * 1.25).min(25.0);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_slope_is_flat() {
        let c = build_smoothed_cone(1.0, 1e-8).unwrap();
        assert_eq!(c.rho, 0.0);
        assert!((c.profile.m(5.0) - 5.0).abs() < 1e-9);
    }

    #[test]
    fn cone_of_slope_nine_tenths() {
        let c = build_smoothed_cone(0.9, 1e-9).unwrap();
        assert!((c.achieved_slope - 0.9).abs() <= 1e-9);
        assert!((c.u - 0.012931).abs() < 1e-5, "u = {}", c.u);
        assert!(c.profile.is_von_mangoldt());
    }

    #[test]
    fn sphere_cap_example() {
        let p = build_example_mprime_zero(0.75 * PI, MPRIME_ZERO_DEFAULT_DROP, 10.0).unwrap();
        assert!((p.m(PI / 2.0) - 1.0).abs() < 1e-9);
        assert!(p.mp(PI / 2.0).abs() < 1e-9);
    }

    #[test]
    fn shallow_drops_are_rejected() {
        let e = build_example_mprime_zero(0.75 * PI, DropParams::new(2.0, 1.0), 10.0).unwrap_err();
        assert!(matches!(e, Error::Construction(ref m) if m.contains("reaches zero")), "{e:?}");
    }
}
