//! Geodesics through a point q at distance r_q from the origin, launched at
//! angle κ from the outward meridian.
//!
//! Clairaut's relation m(r) sin κ(s) = c is constant along the geodesic, so
//! the total change of θ (the turn angle) is an integral of F_c in r alone.
//! Launches are taken counterclockwise; a clockwise launch is its mirror image
//! and has the same turn angle, so negative κ is folded to |κ|.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::analysis;
use crate::error::{Error, Result};
use crate::jacobi::PlaneProfile;
use crate::ode::{self, DenseSolution, Outcome};
use crate::quadrature::{integrate_f, IntegralResult, Status};
use crate::roots::{bisect_predicate, find_root};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicLaunch {
    pub r_q: f64,
    /// Angle with the outward meridian, in [0, π].
    pub kappa: f64,
    /// Clairaut constant m(r_q) sin κ.
    pub c: f64,
}

impl GeodesicLaunch {
    pub fn new(profile: &PlaneProfile, r_q: f64, kappa: f64) -> Result<Self> {
        if !(r_q > 0.0 && r_q < profile.r_max()) {
            return Err(Error::Domain { r: r_q, lo: 0.0, hi: profile.r_max() });
        }
        let kappa = kappa.abs();
        if !(kappa <= PI) {
            return Err(Error::InvalidInput(format!("launch angle must lie in [-pi, pi], got {kappa}")));
        }
        let m = profile.m(r_q);
        let c = if kappa == FRAC_PI_2 {
            m
        } else if kappa == 0.0 || kappa == PI {
            0.0
        } else {
            m * kappa.sin()
        };
        Ok(GeodesicLaunch { r_q, kappa, c })
    }

    /// The launch tangent to the parallel through q.
    pub fn tangent(profile: &PlaneProfile, r_q: f64) -> Result<Self> {
        Self::new(profile, r_q, FRAC_PI_2)
    }
}

/// Largest r ≤ r_q with m(r) = c, for 0 < c < m(r_q).
pub fn turning_radius(profile: &PlaneProfile, r_q: f64, c: f64) -> Result<f64> {
    let m_q = profile.m(r_q);
    if !(c > 0.0 && c < m_q) {
        return Err(Error::InvalidInput(format!("turning radius needs 0 < c < m(r_q) = {m_q}, got {c}")));
    }
    let pts = profile.sample_points(0.0, r_q);
    let mut hi = r_q;
    for &r in pts.iter().rev() {
        if profile.m(r) <= c {
            let root = find_root(|x| profile.m(x) - c, r, hi, 1e-15 * hi.max(1.0))
                .ok_or_else(|| Error::Integration("turning radius bracket lost".into()))?;
            return Ok(root);
        }
        hi = r;
    }
    Err(Error::Integration(format!("no radius below {r_q} with m = {c}")))
}

/// Turn angle T of the geodesic launched at `launch`.
///
/// κ = 0 gives 0. For κ ≤ π/2 the geodesic moves outward and
/// T = ∫_{r_q}^∞ F_c. For κ in (π/2, π) it first dips to the turning radius
/// r_u, giving T = ∫_{r_q}^∞ F_c + 2∫_{r_u}^{r_q} F_c. κ = π runs through the
/// origin and is reported as [`Error::ThroughOrigin`].
pub fn turn_angle(profile: &PlaneProfile, launch: &GeodesicLaunch, tol: f64) -> Result<IntegralResult> {
    let GeodesicLaunch { r_q, kappa, c } = *launch;
    if kappa == 0.0 {
        return Ok(IntegralResult { value: 0.0, abs_error: 0.0, status: Status::Converged });
    }
    if kappa == PI {
        return Err(Error::ThroughOrigin);
    }
    // Near π/2, sin κ can round to 1; the launch is then tangent either way.
    let tangent = kappa == FRAC_PI_2 || c >= profile.m(r_q);
    if kappa <= FRAC_PI_2 || tangent {
        return integrate_f(profile, c, r_q, f64::INFINITY, tangent, tol);
    }
    let r_u = turning_radius(profile, r_q, c)?;
    if r_u >= r_q {
        return integrate_f(profile, c, r_q, f64::INFINITY, true, tol);
    }
    let outer = integrate_f(profile, c, r_q, f64::INFINITY, false, tol / 2.0)?;
    if outer.is_divergent() {
        return Ok(outer);
    }
    let inner = integrate_f(profile, c, r_u, r_q, true, tol / 4.0)?;
    Ok(IntegralResult::combine(outer, inner.scaled(2.0), tol))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayVerdict {
    pub ray: bool,
    /// π − T (−∞ for divergent turn angles).
    #[serde(with = "crate::io::ext_f64")]
    pub margin: f64,
    pub turn_angle: IntegralResult,
}

/// Outcome of comparing a turn angle with π.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Below,
    /// Within the tolerance band of π.
    Equal,
    Above,
}

/// Compares T with π: within `band` counts as equal, and a difference smaller
/// than the quadrature error is refused as [`Error::Undetermined`].
pub fn compare_with_pi(t: &IntegralResult, band: f64) -> Result<Comparison> {
    if t.is_divergent() {
        return Ok(Comparison::Above);
    }
    let d = t.value - PI;
    if d.abs() <= band {
        return Ok(Comparison::Equal);
    }
    if d.abs() <= t.abs_error {
        return Err(Error::Undetermined { value: t.value, abs_error: t.abs_error });
    }
    Ok(if d < 0.0 { Comparison::Below } else { Comparison::Above })
}

/// Quadrature tolerance used when `tol` is the decision band around π.
pub fn quadrature_tol(tol: f64) -> f64 {
    0.1 * tol
}

pub(crate) fn require_von_mangoldt(profile: &PlaneProfile) -> Result<()> {
    if profile.is_von_mangoldt() {
        Ok(())
    } else {
        Err(Error::NotVonMangoldt { first_violation: profile.diagnostics().vm_first_violation.unwrap_or(f64::NAN) })
    }
}

/// On a von Mangoldt plane a geodesic is a ray iff its turn angle is at most π.
///
/// `tol` is the band around π inside which T counts as equal to π; the
/// quadrature itself runs at a tenth of it.
pub fn is_ray(profile: &PlaneProfile, launch: &GeodesicLaunch, tol: f64) -> Result<RayVerdict> {
    require_von_mangoldt(profile)?;
    let t = turn_angle(profile, launch, quadrature_tol(tol))?;
    let cmp = compare_with_pi(&t, tol)?;
    Ok(RayVerdict {
        ray: cmp != Comparison::Above,
        margin: if t.is_divergent() { f64::NEG_INFINITY } else { PI - t.value },
        turn_angle: t,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaHat {
    pub kappa_hat: f64,
    /// Bracket [largest ray angle found, smallest non-ray angle found].
    pub bracket: [f64; 2],
    pub pole: bool,
}

/// The largest angle κ̂(r_q) at which the launch from q is a ray.
///
/// The set of ray angles is an interval [0, κ̂], so κ̂ is found by bisection;
/// κ̂ = π exactly when q is a pole.
pub fn kappa_hat(profile: &PlaneProfile, r_q: f64, tol: f64) -> Result<KappaHat> {
    require_von_mangoldt(profile)?;
    let pole = analysis::is_pole(profile, r_q, tol)?;
    if pole.pole {
        return Ok(KappaHat { kappa_hat: PI, bracket: [PI, PI], pole: true });
    }
    let ray_at = |k: f64| -> Result<bool> {
        let launch = GeodesicLaunch::new(profile, r_q, k)?;
        Ok(is_ray(profile, &launch, tol)?.ray)
    };
    let (lo, hi) = if ray_at(FRAC_PI_2)? { (FRAC_PI_2, pole.witness_kappa.unwrap_or(PI)) } else { (0.0, FRAC_PI_2) };
    let mut failure = None;
    let (a, b) = bisect_predicate(
        |k| match ray_at(k) {
            Ok(ray) => !ray,
            Err(e) => {
                failure.get_or_insert(e);
                true
            }
        },
        lo,
        hi,
        tol.max(1e-12),
        200,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(KappaHat { kappa_hat: 0.5 * (a + b), bracket: [a, b], pole: false })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub s: f64,
    pub r: f64,
    pub rdot: f64,
    pub theta: f64,
    pub theta_dot: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceEnd {
    Completed,
    /// r reached r_max at arclength `s`.
    WindowExit {
        s: f64,
    },
    /// r reached 0 (meridian launches toward the origin).
    ReachedOrigin {
        s: f64,
    },
    /// θ reached the requested stopping angle.
    ThetaReached {
        s: f64,
    },
}

/// A geodesic integrated directly from the geodesic equations.
#[derive(Clone, Debug)]
pub struct GeodesicTrace {
    pub launch: GeodesicLaunch,
    pub end: TraceEnd,
    pub samples: Vec<TraceSample>,
    dense: DenseSolution<3>,
}

impl GeodesicTrace {
    pub fn s_end(&self) -> f64 {
        self.dense.t_end()
    }

    /// (r, ṙ, θ) at arclength s.
    pub fn state_at(&self, s: f64) -> [f64; 3] {
        self.dense.eval(s)
    }

    /// Largest |ṙ² + (c/m)² − 1| over the samples.
    pub fn speed_drift(&self, profile: &PlaneProfile) -> f64 {
        let c = self.launch.c;
        self.samples.iter().map(|p| (p.rdot * p.rdot + (c / profile.m(p.r)).powi(2) - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Number of sign changes of ṙ along the samples (turning points).
    pub fn turning_points(&self) -> usize {
        let mut n = 0;
        let mut prev = 0.0;
        for p in &self.samples {
            if p.rdot != 0.0 {
                if prev != 0.0 && (p.rdot > 0.0) != (prev > 0.0) {
                    n += 1;
                }
                prev = p.rdot;
            }
        }
        n
    }
}

/// Integrates (r, ṙ, θ) with r̈ = c² m'/m³ and θ̇ = c/m² up to arclength
/// `s_max`, stopping early at the window edge or at the origin.
pub fn trace_geodesic(profile: &PlaneProfile, launch: &GeodesicLaunch, s_max: f64, tol: f64) -> Result<GeodesicTrace> {
    trace_until(profile, launch, s_max, tol, None)
}

pub(crate) fn trace_until(
    profile: &PlaneProfile,
    launch: &GeodesicLaunch,
    s_max: f64,
    tol: f64,
    theta_stop: Option<f64>,
) -> Result<GeodesicTrace> {
    if !(s_max > 0.0 && s_max.is_finite()) {
        return Err(Error::InvalidInput(format!("s_max must be positive and finite, got {s_max}")));
    }
    let c = launch.c;
    let r_max = profile.r_max();
    let rhs = |_: f64, y: &[f64; 3]| {
        let [m, mp] = profile.state(y[0]);
        [y[1], c * c * mp / (m * m * m), c / (m * m)]
    };
    let exit = |_: f64, y: &[f64; 3]| r_max - y[0];
    let origin = |_: f64, y: &[f64; 3]| y[0] - 1e-9 * r_max;
    let theta_ev = |_: f64, y: &[f64; 3]| theta_stop.map_or(-1.0, |t| t - y[2]);
    let opts = ode::Options { rtol: tol, atol: tol * 1e-2, h_max: 0.5, max_steps: 5_000_000 };
    let sol =
        ode::solve(rhs, 0.0, [launch.r_q, launch.kappa.cos(), 0.0], s_max, &[], &opts, &[&exit, &origin, &theta_ev]);
    let end = match sol.outcome {
        Outcome::Completed => TraceEnd::Completed,
        Outcome::Event { index: 0, t } => TraceEnd::WindowExit { s: t },
        Outcome::Event { index: 1, t } => TraceEnd::ReachedOrigin { s: t },
        Outcome::Event { t, .. } => TraceEnd::ThetaReached { s: t },
        Outcome::MaxSteps { t } => {
            return Err(Error::Integration(format!("geodesic trace ran out of steps at s = {t}")))
        }
    };
    let samples = sol
        .dense
        .nodes()
        .into_iter()
        .map(|s| {
            let [r, rdot, theta] = sol.dense.eval(s);
            let m = profile.m(r);
            TraceSample { s, r, rdot, theta, theta_dot: c / (m * m) }
        })
        .collect();
    Ok(GeodesicTrace { launch: *launch, end, samples, dense: sol.dense })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::CurvatureSpec;
    use crate::jacobi::solve_jacobi;

    fn plane(spec: CurvatureSpec, r_max: f64) -> PlaneProfile {
        solve_jacobi(&spec, r_max, 1e-11).unwrap()
    }

    #[test]
    fn launch_clairaut_constant() {
        let p = plane(CurvatureSpec::constant(0.0), 10.0);
        let l = GeodesicLaunch::new(&p, 2.0, FRAC_PI_2).unwrap();
        assert_eq!(l.c, p.m(2.0));
        assert_eq!(GeodesicLaunch::new(&p, 2.0, PI).unwrap().c, 0.0);
        let l = GeodesicLaunch::new(&p, 2.0, -0.5).unwrap();
        assert_eq!(l.kappa, 0.5);
        assert!(GeodesicLaunch::new(&p, 0.0, 1.0).is_err());
    }

    #[test]
    fn turning_radius_examples() {
        let flat = plane(CurvatureSpec::constant(0.0), 10.0);
        assert!((turning_radius(&flat, 2.0, 1.0).unwrap() - 1.0).abs() < 1e-12);
        let hyp = plane(CurvatureSpec::constant(-1.0), 10.0);
        assert!((turning_radius(&hyp, 2.0, 1f64.sinh()).unwrap() - 1.0).abs() < 1e-10);
        let k0 = plane(CurvatureSpec::ku_family(0.0), 10.0);
        assert!((turning_radius(&k0, 4.0, k0.m(2.0)).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn flat_turn_angles_match_geometry() {
        // A straight line leaving q at angle κ from the outward meridian ends
        // up parallel to its launch direction, so the sweep ahead of q is κ.
        let p = plane(CurvatureSpec::constant(0.0), 100.0);
        for &k in &[0.3, 1.0, FRAC_PI_2, 2.0, 2.8] {
            let l = GeodesicLaunch::new(&p, 1.5, k).unwrap();
            let t = turn_angle(&p, &l, 1e-10).unwrap();
            let exact = k;
            assert!((t.value - exact).abs() < 1e-8, "kappa={k}: {} vs {exact}", t.value);
        }
    }

    #[test]
    fn through_origin_is_distinct() {
        let p = plane(CurvatureSpec::constant(0.0), 10.0);
        let l = GeodesicLaunch::new(&p, 1.0, PI).unwrap();
        assert_eq!(turn_angle(&p, &l, 1e-8), Err(Error::ThroughOrigin));
        let l = GeodesicLaunch::new(&p, 1.0, 0.0).unwrap();
        assert_eq!(turn_angle(&p, &l, 1e-8).unwrap().value, 0.0);
    }

    #[test]
    fn flat_trace_is_a_straight_line() {
        let p = plane(CurvatureSpec::constant(0.0), 50.0);
        let l = GeodesicLaunch::tangent(&p, 1.0).unwrap();
        let tr = trace_geodesic(&p, &l, 10.0, 1e-11).unwrap();
        assert_eq!(tr.end, TraceEnd::Completed);
        for s in tr.samples.iter().filter(|s| s.s > 0.0) {
            assert!((s.r - (1.0 + s.s * s.s).sqrt()).abs() < 1e-8);
            assert!((s.theta - s.s.atan()).abs() < 1e-8);
            assert!((s.theta_dot * p.m(s.r).powi(2) - l.c).abs() < 1e-9);
        }
        assert!(tr.speed_drift(&p) < 1e-8);
    }

    #[test]
    fn meridian_reaches_origin() {
        let p = plane(CurvatureSpec::constant(0.0), 10.0);
        let l = GeodesicLaunch::new(&p, 2.0, PI).unwrap();
        let tr = trace_geodesic(&p, &l, 5.0, 1e-10).unwrap();
        match tr.end {
            TraceEnd::ReachedOrigin { s } => assert!((s - 2.0).abs() < 1e-6),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn comparison_protocol() {
        let r = |v: f64, e: f64| IntegralResult { value: v, abs_error: e, status: Status::Converged };
        assert_eq!(compare_with_pi(&r(PI + 1e-10, 1e-11), 1e-8).unwrap(), Comparison::Equal);
        assert_eq!(compare_with_pi(&r(3.0, 1e-9), 1e-8).unwrap(), Comparison::Below);
        assert!(compare_with_pi(&r(PI + 1e-6, 1e-5), 1e-8).is_err());
        let d = IntegralResult::divergent(Status::DivergentTail);
        assert_eq!(compare_with_pi(&d, 1e-8).unwrap(), Comparison::Above);
    }
}
