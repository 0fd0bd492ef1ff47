//! Classification of points and the radii of the distinguished sets.
//!
//! On a von Mangoldt plane everything reduces to turn angles: q lies in the
//! critical set 𝔠_m iff the parallel-tangent geodesic γ_q has T ≤ π, in the
//! away set A_m iff T < π, and is a pole iff every launch from q is a ray.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesics::{compare_with_pi, quadrature_tol, require_von_mangoldt, turn_angle, Comparison, GeodesicLaunch};
use crate::jacobi::{slope_at_infinity, total_curvature, PlaneProfile, SlopeEstimate, TailModel, TotalCurvature};
use crate::quadrature::{integrate_adaptive, minus_two_tail, IntegralResult, MinusTwoTail};
use crate::roots::{bisect_predicate, find_root, golden_max};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub r: f64,
    pub critical: bool,
    pub away: bool,
    /// π − T(γ_q).
    #[serde(with = "crate::io::ext_f64")]
    pub margin: f64,
    pub turn_angle: IntegralResult,
}

/// Turn angle of γ_q and the resulting membership in 𝔠_m and A_m.
pub fn classify(profile: &PlaneProfile, r_q: f64, tol: f64) -> Result<Classification> {
    classify_with(profile, r_q, tol, quadrature_tol(tol))
}

fn classify_with(profile: &PlaneProfile, r_q: f64, band: f64, qtol: f64) -> Result<Classification> {
    require_von_mangoldt(profile)?;
    let launch = GeodesicLaunch::tangent(profile, r_q)?;
    let t = turn_angle(profile, &launch, qtol)?;
    let cmp = compare_with_pi(&t, band)?;
    Ok(Classification {
        r: r_q,
        critical: cmp != Comparison::Above,
        away: cmp == Comparison::Below,
        margin: if t.is_divergent() { f64::NEG_INFINITY } else { PI - t.value },
        turn_angle: t,
    })
}

/// q ∈ 𝔠_m: the geodesic tangent to the parallel through q is a ray.
pub fn is_critical(profile: &PlaneProfile, r_q: f64, tol: f64) -> Result<bool> {
    Ok(classify(profile, r_q, tol)?.critical)
}

/// q ∈ A_m: T(γ_q) < π outside the tolerance band.
pub fn in_away_set(profile: &PlaneProfile, r_q: f64, tol: f64) -> Result<bool> {
    Ok(classify(profile, r_q, tol)?.away)
}

/// Slope D in T(c) = π + c·D + o(c) for launches from r_q approaching the
/// inward meridian (c → 0):
///
/// D = ∫_{r_q}^∞ m⁻² + 2(∫_0^{r_q} (m⁻² − r⁻²) dr − 1/r_q).
///
/// Returns `(D, error)`; D is +∞ when ∫m⁻² diverges.
pub fn pole_limit_slope(profile: &PlaneProfile, r_q: f64) -> (f64, f64) {
    let tail = minus_two_tail(profile);
    if !tail.integrable {
        return (f64::INFINITY, 0.0);
    }
    let r_max = profile.r_max();
    let inv2 = |r: f64| profile.m(r).powi(-2);
    let mut outer = tail.estimate;
    let mut err = tail.error_indicator;
    let mut lo = r_q;
    let mut len = 0.5;
    while lo < r_max {
        let hi = (lo + len).min(r_max);
        let q = integrate_adaptive(&inv2, lo, hi, 1e-13, 200);
        outer += q.value;
        err += q.abs_error;
        lo = hi;
        len *= 2.0;
    }
    // Near 0, m = r − K(0) r³/6 + …, so m⁻² − r⁻² → K(0)/3.
    let r_s = (1e-3f64).min(0.5 * r_q);
    let near = profile.curvature(0.0) / 3.0 * r_s;
    let diff = |r: f64| {
        let m = profile.m(r);
        (r - m) * (r + m) / (m * m * r * r)
    };
    let q = integrate_adaptive(&diff, r_s, r_q, 1e-12, 400);
    err += 2.0 * q.abs_error + 1e-9;
    (outer + 2.0 * (near + q.value - 1.0 / r_q), err)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleVerdict {
    pub pole: bool,
    /// False when the decision sits inside a tolerance band.
    pub determined: bool,
    /// Largest turn angle found over launches in [π/2, π).
    #[serde(with = "crate::io::ext_f64")]
    pub sup_turn_angle: f64,
    pub sup_kappa: f64,
    /// Smallest sampled angle whose launch is not a ray.
    pub witness_kappa: Option<f64>,
    #[serde(with = "crate::io::ext_f64")]
    pub limit_slope: f64,
}

const POLE_GRID: usize = 24;

/// q is a pole iff every launch from q is a ray.
///
/// Ray angles form an interval [0, κ̂], so it suffices that launches with
/// κ in [π/2, π) have T ≤ π. These are sampled on a grid refined by golden
/// section around the largest value; the limit κ → π, where the grid cannot
/// reach, is settled by the sign of [`pole_limit_slope`].
pub fn is_pole(profile: &PlaneProfile, r_q: f64, tol: f64) -> Result<PoleVerdict> {
    require_von_mangoldt(profile)?;
    let qtol = quadrature_tol(tol);
    let k_top = PI - 1e-3;
    let kappas: Vec<f64> = (0..POLE_GRID)
        .map(|j| {
            // Denser towards π, where the turning radius shrinks.
            let x = j as f64 / (POLE_GRID - 1) as f64;
            FRAC_PI_2 + (k_top - FRAC_PI_2) * (1.0 - (1.0 - x) * (1.0 - x))
        })
        .collect();
    let t_at = |k: f64| -> Result<IntegralResult> {
        let launch = GeodesicLaunch::new(profile, r_q, k)?;
        turn_angle(profile, &launch, qtol)
    };
    let mut determined = true;
    let mut best = (FRAC_PI_2, f64::NEG_INFINITY);
    let mut values = Vec::with_capacity(kappas.len());
    for &k in &kappas {
        let t = t_at(k)?;
        let v = if t.is_divergent() { f64::INFINITY } else { t.value };
        match compare_with_pi(&t, tol) {
            Ok(Comparison::Above) => {
                let (d, _) = pole_limit_slope(profile, r_q);
                return Ok(PoleVerdict {
                    pole: false,
                    determined: true,
                    sup_turn_angle: v,
                    sup_kappa: k,
                    witness_kappa: Some(k),
                    limit_slope: d,
                });
            }
            Ok(_) => {}
            Err(Error::Undetermined { .. }) => determined = false,
            Err(e) => return Err(e),
        }
        if v > best.1 {
            best = (k, v);
        }
        values.push(v);
    }
    // Refine the largest sampled value between its neighbours.
    let i = kappas.iter().position(|&k| k == best.0).unwrap_or(0);
    let a = kappas[i.saturating_sub(1)];
    let b = kappas[(i + 1).min(kappas.len() - 1)];
    if b > a {
        let (k, v) = golden_max(|k| t_at(k).map(|t| t.value).unwrap_or(f64::INFINITY), a, b, 1e-4);
        if v > best.1 {
            best = (k, v);
        }
        if v > PI + tol {
            let (d, _) = pole_limit_slope(profile, r_q);
            return Ok(PoleVerdict {
                pole: false,
                determined: true,
                sup_turn_angle: v,
                sup_kappa: k,
                witness_kappa: Some(k),
                limit_slope: d,
            });
        }
    }
    let (d, d_err) = pole_limit_slope(profile, r_q);
    let d_band = d_err.max(1e-9);
    if d.abs() <= d_band {
        determined = false;
    }
    Ok(PoleVerdict {
        pole: d <= 0.0,
        determined,
        sup_turn_angle: best.1,
        sup_kappa: best.0,
        witness_kappa: None,
        limit_slope: d,
    })
}

/// A radius that may be zero, finite or infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Radius {
    Zero,
    Finite {
        estimate: f64,
        bracket: [f64; 2],
    },
    /// `window_limited` marks an infinite answer that rests on the window
    /// rather than on a certified tail.
    Infinite {
        window_limited: bool,
    },
}

impl Radius {
    pub fn value(&self) -> f64 {
        match self {
            Radius::Zero => 0.0,
            Radius::Finite { estimate, .. } => *estimate,
            Radius::Infinite { .. } => f64::INFINITY,
        }
    }
}

fn require_nonnegative(profile: &PlaneProfile) -> Result<()> {
    if profile.diagnostics().nonnegative_curvature {
        Ok(())
    } else {
        Err(Error::InvalidInput("this quantity is defined for planes with K >= 0".into()))
    }
}

fn tangent_turn_angle(profile: &PlaneProfile, x: f64, qtol: f64) -> Result<f64> {
    let launch = GeodesicLaunch::tangent(profile, x)?;
    let t = turn_angle(profile, &launch, qtol)?;
    Ok(if t.is_divergent() { f64::INFINITY } else { t.value })
}

/// Radius R_m of the critical ball on planes with K ≥ 0.
///
/// Zero when ∫m⁻² diverges, infinite when m'(∞) ≥ 1/2, and otherwise the
/// root of T(x) = π, which is non-decreasing in x.
pub fn critical_ball_radius(profile: &PlaneProfile, tol: f64) -> Result<Radius> {
    require_nonnegative(profile)?;
    if !minus_two_tail(profile).integrable {
        return Ok(Radius::Zero);
    }
    let r_max = profile.r_max();
    let slope = profile.mp(r_max);
    if slope >= 0.5 - tol {
        let exact = matches!(profile.tail_model(), TailModel::Linear { .. });
        return Ok(Radius::Infinite { window_limited: !exact });
    }
    let qtol = quadrature_tol(tol);
    let above = |x: f64| tangent_turn_angle(profile, x, qtol).map(|t| t > PI);
    let top = r_max * (1.0 - 1e-9);
    let mut x = (1e-3f64).min(top / 1024.0);
    let mut lo = 0.0;
    let hi = loop {
        if above(x)? {
            break x;
        }
        if x >= top {
            return Ok(Radius::Infinite { window_limited: true });
        }
        lo = x;
        x = (2.0 * x).min(top);
    };
    let mut failure = None;
    let (a, b) = bisect_predicate(
        |x| match above(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                true
            }
        },
        lo,
        hi,
        (1e-10 * hi).max(1e-13),
        200,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Radius::Finite { estimate: 0.5 * (a + b), bracket: [a, b] })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoM {
    pub estimate: f64,
    pub bracket: [f64; 2],
    /// m' equals 1/2 within tolerance on the whole bracket instead of
    /// crossing it (a cone of slope exactly 1/2).
    pub plateau: bool,
    /// K(ρ_m) > 0, which is equivalent to uniqueness of the root.
    pub curvature_positive: bool,
}

/// The radius ρ_m where m' = 1/2, on planes with K ≥ 0 (m' non-increasing).
/// `None` when m' stays above 1/2 on the window.
pub fn rho_m(profile: &PlaneProfile, tol: f64) -> Result<Option<RhoM>> {
    require_nonnegative(profile)?;
    let eps = tol.max(1e-12);
    let r_max = profile.r_max();
    if profile.mp(r_max) > 0.5 + eps {
        return Ok(None);
    }
    let xtol = 1e-12 * r_max.max(1.0);
    let (_, a) = bisect_predicate(|r| profile.mp(r) <= 0.5 + eps, 0.0, r_max, xtol, 200);
    let b = if profile.mp(r_max) < 0.5 - eps {
        Some(bisect_predicate(|r| profile.mp(r) < 0.5 - eps, 0.0, r_max, xtol, 200).1)
    } else {
        None
    };
    let plateau = b.is_none_or(|b| b - a > 1e-6 * r_max.max(1.0));
    let (estimate, bracket) = if plateau {
        (a, [a, b.unwrap_or(r_max)])
    } else {
        let b = b.unwrap_or(r_max);
        let root = find_root(|r| profile.mp(r) - 0.5, a, b, xtol).unwrap_or(0.5 * (a + b));
        (root, [a, b])
    };
    Ok(Some(RhoM { estimate, bracket, plateau, curvature_positive: profile.curvature(estimate) > 0.0 }))
}

/// Radius R_p of the ball of poles, by bisection on [`is_pole`].
pub fn pole_radius(profile: &PlaneProfile, tol: f64) -> Result<Radius> {
    require_von_mangoldt(profile)?;
    let top = profile.r_max() * (1.0 - 1e-6);
    let mut x = (1e-3f64).min(top / 1024.0);
    if !is_pole(profile, x, tol)?.pole {
        return Ok(Radius::Zero);
    }
    let mut lo = x;
    let hi = loop {
        if x >= top {
            return Ok(Radius::Infinite { window_limited: true });
        }
        x = (2.0 * x).min(top);
        if !is_pole(profile, x, tol)?.pole {
            break x;
        }
        lo = x;
    };
    let mut failure = None;
    let (a, b) = bisect_predicate(
        |r| match is_pole(profile, r, tol) {
            Ok(v) => !v.pole,
            Err(e) => {
                failure.get_or_insert(e);
                true
            }
        },
        lo,
        hi,
        (1e-7 * hi).max(1e-12),
        200,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Radius::Finite { estimate: 0.5 * (a + b), bracket: [a, b] })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeckBound {
    pub x: f64,
    pub y: f64,
    /// Maximum of m' on [x, y].
    pub b: f64,
    /// f = m⁻¹(cos(πb)·m(y)); absent when the hypotheses fail.
    pub f: Option<f64>,
    /// m' > 0 on [0, y] and m' < 1/2 on [x, y].
    pub applicable: bool,
    /// x ≤ f, without which the interval [x, f] is empty.
    pub x_le_f: bool,
    /// Every sampled radius in [x, f] is outside 𝔠_m.
    pub verified_disjoint: bool,
    pub samples_checked: usize,
    pub note: Option<String>,
}

/// Radii in [x, f] with f = m⁻¹(cos(πb)·m(y)) are outside 𝔠_m whenever
/// m' > 0 on [0, y], m' < 1/2 on [x, y] and x ≤ f; this checks the
/// hypotheses and then verifies the conclusion at 100 radii.
pub fn neck_bound(profile: &PlaneProfile, x: f64, y: f64, tol: f64) -> Result<NeckBound> {
    require_von_mangoldt(profile)?;
    if !(x > 0.0 && x < y && y <= profile.r_max()) {
        return Err(Error::InvalidInput(format!("neck bound needs 0 < x < y <= r_max, got x = {x}, y = {y}")));
    }
    let (_, b) = profile.max_mp(x, y);
    let (_, min_slope) = profile.min_mp(0.0, y);
    let mut out = NeckBound {
        x,
        y,
        b,
        f: None,
        applicable: false,
        x_le_f: false,
        verified_disjoint: false,
        samples_checked: 0,
        note: None,
    };
    if !(min_slope > 0.0) {
        out.note = Some(format!("m' is not positive on [0, y] (min {min_slope})"));
        return Ok(out);
    }
    if !(b < 0.5) {
        out.note = Some(format!("max of m' on [x, y] is {b}, not below 1/2"));
        return Ok(out);
    }
    out.applicable = true;
    let target = (PI * b).cos() * profile.m(y);
    let f = profile
        .inverse_m(target, 0.0, y)
        .ok_or_else(|| Error::Integration("m⁻¹ of the neck target not bracketed".into()))?;
    out.f = Some(f);
    out.x_le_f = x <= f;
    if !out.x_le_f {
        out.note = Some(format!("x = {x} exceeds f = {f}; the interval [x, f] is empty"));
        return Ok(out);
    }
    let n = 100;
    let mut all_outside = true;
    for i in 0..n {
        let r = x + (f - x) * i as f64 / (n - 1) as f64;
        match classify(profile, r, tol) {
            Ok(c) if !c.critical => {}
            _ => all_outside = false,
        }
        out.samples_checked += 1;
    }
    out.verified_disjoint = all_outside;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSample {
    pub r: f64,
    #[serde(with = "crate::io::ext_f64")]
    pub turn_angle: f64,
    pub abs_error: f64,
    pub status: crate::quadrature::Status,
    /// `None` where the comparison with π stayed undetermined.
    pub critical: Option<bool>,
    pub away: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Integrability {
    pub m_minus2_integrable: bool,
    pub m_minus2_tail: MinusTwoTail,
    /// m stays bounded away from 0 at the end of the window.
    pub liminf_m_positive: bool,
    pub min_m_outer_half: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub r_max: f64,
    pub tol: f64,
    /// Closed r-intervals approximating r(𝔠_m ∖ {o}).
    pub critical_intervals: Vec<[f64; 2]>,
    /// Open r-intervals approximating r(A_m).
    pub away_intervals: Vec<[f64; 2]>,
    /// Components of 𝔠_m, counting {o} when it is isolated.
    pub critical_components: usize,
    pub away_components: usize,
    pub critical_disconnected: bool,
    pub away_disconnected: bool,
    /// Grid radii whose classification stayed undetermined.
    pub gaps: Vec<f64>,
    #[serde(rename = "R_m")]
    pub r_m: Option<Radius>,
    pub rho_m: Option<RhoM>,
    #[serde(rename = "R_p")]
    pub r_p: Radius,
    pub total_curvature: TotalCurvature,
    pub slope_at_infinity: SlopeEstimate,
    pub integrability: Integrability,
    pub neck_bounds: Vec<NeckBound>,
    pub samples: Vec<ScanSample>,
}

/// A grid on (0, r_max): geometric near the origin, uniform beyond.
pub fn default_grid(r_max: f64, n: usize) -> Vec<f64> {
    let n = n.max(8);
    let n_geo = n / 4;
    let top = r_max * (1.0 - 1e-6);
    let lo = (1e-3f64).min(r_max / 1e4);
    let knee = (1.0f64).min(r_max / 10.0);
    let mut g: Vec<f64> = (0..n_geo).map(|i| lo * (knee / lo).powf(i as f64 / n_geo as f64)).collect();
    let n_uni = n - n_geo;
    g.extend((0..n_uni).map(|i| knee + (top - knee) * i as f64 / (n_uni - 1) as f64));
    g.sort_by(|a, b| a.total_cmp(b));
    g.dedup();
    g
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Flag {
    Yes,
    No,
    Unknown,
}

fn flag(v: Option<bool>) -> Flag {
    match v {
        Some(true) => Flag::Yes,
        Some(false) => Flag::No,
        None => Flag::Unknown,
    }
}

/// Classifies every grid radius, refines the boundaries of 𝔠_m and A_m by
/// bisection and assembles the report. Grid points run in parallel on the
/// current rayon pool.
pub fn scan_sets(profile: &PlaneProfile, r_grid: &[f64], tol: f64) -> Result<AnalysisReport> {
    require_von_mangoldt(profile)?;
    let r_max = profile.r_max();
    let mut grid: Vec<f64> = r_grid.iter().copied().filter(|r| *r > 0.0 && *r < r_max).collect();
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup();
    if grid.is_empty() {
        return Err(Error::InvalidInput("scan grid has no radius inside (0, r_max)".into()));
    }
    let qtol = quadrature_tol(tol);
    let samples: Vec<ScanSample> =
        grid.par_iter().map(|&r| scan_point(profile, r, tol, qtol)).collect::<Result<Vec<_>>>()?;

    let crit: Vec<Flag> = samples.iter().map(|s| flag(s.critical)).collect();
    let away: Vec<Flag> = samples.iter().map(|s| flag(s.away)).collect();
    let xtol = (tol * r_max).max(1e-12 * r_max);
    let critical_intervals =
        intervals(&grid, &crit, r_max, xtol, |r| classify_with(profile, r, tol, qtol).ok().map(|c| c.critical));
    let away_intervals =
        intervals(&grid, &away, r_max, xtol, |r| classify_with(profile, r, tol, qtol).ok().map(|c| c.away));
    let o_isolated = critical_intervals.first().is_none_or(|iv| iv[0] > 0.0);
    let critical_components = critical_intervals.len() + usize::from(o_isolated);
    let away_components = away_intervals.len();

    let nonneg = profile.diagnostics().nonnegative_curvature;
    let r_m = if nonneg { Some(critical_ball_radius(profile, tol)?) } else { None };
    let rho = if nonneg { rho_m(profile, tol)? } else { None };
    let r_p = pole_radius(profile, tol)?;
    let tail = minus_two_tail(profile);
    let (_, min_outer) = profile.min_m(0.5 * r_max, r_max);
    Ok(AnalysisReport {
        r_max,
        tol,
        critical_disconnected: critical_components >= 2,
        away_disconnected: away_components >= 2,
        critical_components,
        away_components,
        critical_intervals,
        away_intervals,
        gaps: samples.iter().filter(|s| s.critical.is_none()).map(|s| s.r).collect(),
        r_m,
        rho_m: rho,
        r_p,
        total_curvature: total_curvature(profile, tol),
        slope_at_infinity: slope_at_infinity(profile, tol),
        integrability: Integrability {
            m_minus2_integrable: tail.integrable,
            m_minus2_tail: tail,
            liminf_m_positive: min_outer > 0.0 && profile.mp(r_max) >= 0.0,
            min_m_outer_half: min_outer,
        },
        neck_bounds: Vec::new(),
        samples,
    })
}

fn scan_point(profile: &PlaneProfile, r: f64, tol: f64, qtol: f64) -> Result<ScanSample> {
    let mut last = None;
    for q in [qtol, qtol * 1e-2] {
        match classify_with(profile, r, tol, q) {
            Ok(c) => {
                return Ok(ScanSample {
                    r,
                    turn_angle: c.turn_angle.value,
                    abs_error: c.turn_angle.abs_error,
                    status: c.turn_angle.status,
                    critical: Some(c.critical),
                    away: Some(c.away),
                })
            }
            Err(Error::Undetermined { value, abs_error }) => last = Some((value, abs_error)),
            Err(e) => return Err(e),
        }
    }
    let (value, abs_error) = last.unwrap_or((f64::NAN, f64::NAN));
    Ok(ScanSample {
        r,
        turn_angle: value,
        abs_error,
        status: crate::quadrature::Status::WindowLimited,
        critical: None,
        away: None,
    })
}

// Runs of `Yes` flags become intervals; boundaries between `Yes` and `No`
// neighbours are refined with `pred`. A run touching the first grid point
// extends to 0, one touching the last extends to r_max.
fn intervals(grid: &[f64], flags: &[Flag], r_max: f64, xtol: f64, pred: impl Fn(f64) -> Option<bool>) -> Vec<[f64; 2]> {
    let refine = |inside: f64, outside: f64| -> f64 {
        let (a, b) = bisect_predicate(|r| pred(r) != Some(true), inside, outside, xtol, 200);
        0.5 * (a + b)
    };
    let mut out = Vec::new();
    let mut i = 0;
    let n = grid.len();
    while i < n {
        if flags[i] != Flag::Yes {
            i += 1;
            continue;
        }
        let start = if i == 0 {
            0.0
        } else if flags[i - 1] == Flag::No {
            refine(grid[i], grid[i - 1])
        } else {
            grid[i]
        };
        let mut j = i;
        while j + 1 < n && flags[j + 1] == Flag::Yes {
            j += 1;
        }
        let end = if j == n - 1 {
            r_max
        } else if flags[j + 1] == Flag::No {
            refine(grid[j], grid[j + 1])
        } else {
            grid[j]
        };
        out.push([start, end]);
        i = j + 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::CurvatureSpec;
    use crate::jacobi::solve_jacobi;

    #[test]
    fn flat_plane_is_all_critical_and_poles() {
        let p = solve_jacobi(&CurvatureSpec::constant(0.0), 50.0, 1e-11).unwrap();
        assert!(is_critical(&p, 2.0, 1e-8).unwrap());
        assert!(in_away_set(&p, 2.0, 1e-8).unwrap());
        let v = is_pole(&p, 3.0, 1e-8).unwrap();
        assert!(v.pole && v.determined);
        assert!((v.limit_slope + 1.0 / 3.0).abs() < 1e-8);
        assert_eq!(critical_ball_radius(&p, 1e-8).unwrap(), Radius::Infinite { window_limited: false });
        assert_eq!(rho_m(&p, 1e-8).unwrap(), None);
    }

    #[test]
    fn hyperbolic_limit_slope_closed_form() {
        let p = solve_jacobi(&CurvatureSpec::constant(-1.0), 30.0, 1e-12).unwrap();
        let (d, _) = pole_limit_slope(&p, 1.0);
        let exact = -1.0 - 1.0 / 1f64.tanh();
        assert!((d - exact).abs() < 1e-6, "{d} vs {exact}");
        assert!(is_pole(&p, 1.0, 1e-8).unwrap().pole);
    }

    #[test]
    fn grid_helpers() {
        let g = default_grid(10.0, 64);
        assert!(g.len() >= 60 && g[0] > 0.0 && *g.last().unwrap() < 10.0);
        let flags = [Flag::No, Flag::Yes, Flag::Yes, Flag::No, Flag::Yes];
        let grid = [1.0, 2.0, 3.0, 4.0, 5.0];
        let iv = intervals(&grid, &flags, 6.0, 1e-9, |r| Some((1.5..3.5).contains(&r) || r > 4.5));
        assert_eq!(iv.len(), 2);
        assert!((iv[0][0] - 1.5).abs() < 1e-8 && (iv[0][1] - 3.5).abs() < 1e-8);
        assert!((iv[1][0] - 4.5).abs() < 1e-8 && iv[1][1] == 6.0);
    }
}
