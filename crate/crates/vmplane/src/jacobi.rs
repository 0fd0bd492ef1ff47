//! The Jacobi initial value problem m'' + K m = 0, m(0) = 0, m'(0) = 1, and
//! the plane-level quantities derived from its solution.

use serde::{Deserialize, Serialize};

use crate::curvature::{check_von_mangoldt, CurvatureSpec, Extrapolate, Table};
use crate::error::{Error, Result};
use crate::ode::{self, DenseSolution, Outcome};
use crate::quadrature::integrate_adaptive;
use crate::roots::find_root;

/// Default window for quantities "at infinity".
pub const DEFAULT_R_MAX: f64 = 200.0;
/// Default relative tolerance of the Jacobi solve.
pub const DEFAULT_TOL: f64 = 1e-11;
/// Largest step the integrator may take, independent of the window size.
const H_MAX: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub von_mangoldt: bool,
    pub vm_first_violation: Option<f64>,
    /// K ≥ 0 on the sampled window (and on the exact tail when it is known).
    pub nonnegative_curvature: bool,
    /// Minimum of m over [δ, r_max] with δ = min(0.1, r_max/10), and where it occurs.
    pub min_m: f64,
    pub min_m_at: f64,
    pub m_end: f64,
    pub mp_end: f64,
    pub steps: usize,
    pub tol: f64,
}

/// How m behaves beyond the computed window, as far as can be certified.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailModel {
    /// K ≡ 0 past r_max, so m is affine there with this positive slope.
    Linear {
        slope: f64,
    },
    /// K is non-increasing and non-positive past r_max, so m' is
    /// non-decreasing and stays at least `slope_min > 0`.
    Convex {
        slope_min: f64,
    },
    /// K = 1/(4(r+1)²) past r_max, so m = √(r+1)(a + b ln(r+1)) there.
    Resonant {
        a: f64,
        b: f64,
    },
    Unknown,
}

#[derive(Clone, Debug)]
enum Backing {
    Ode(DenseSolution<2>),
    Samples(Samples),
}

#[derive(Clone, Debug)]
struct Samples {
    r: Vec<f64>,
    m: Vec<f64>,
    mp: Vec<f64>,
    k: Vec<f64>,
}

impl Samples {
    // Cubic Hermite on (m, m') for m and on (m', −Km) for m'.
    fn eval(&self, r: f64) -> [f64; 2] {
        let n = self.r.len();
        let r = r.clamp(self.r[0], self.r[n - 1]);
        let i = (self.r.partition_point(|x| *x <= r).max(1) - 1).min(n - 2);
        let h = self.r[i + 1] - self.r[i];
        let t = (r - self.r[i]) / h;
        let herm = |y0: f64, d0: f64, y1: f64, d1: f64| {
            let t2 = t * t;
            let t3 = t2 * t;
            (2.0 * t3 - 3.0 * t2 + 1.0) * y0
                + (t3 - 2.0 * t2 + t) * h * d0
                + (-2.0 * t3 + 3.0 * t2) * y1
                + (t3 - t2) * h * d1
        };
        let mpp0 = -self.k[i] * self.m[i];
        let mpp1 = -self.k[i + 1] * self.m[i + 1];
        [herm(self.m[i], self.mp[i], self.m[i + 1], self.mp[i + 1]), herm(self.mp[i], mpp0, self.mp[i + 1], mpp1)]
    }
}

/// A solved plane: dense m and m' on [0, r_max] plus diagnostics.
#[derive(Clone, Debug)]
pub struct PlaneProfile {
    spec: CurvatureSpec,
    r_max: f64,
    backing: Backing,
    diagnostics: Diagnostics,
}

/// Solves the Jacobi IVP on [0, r_max] with relative tolerance `tol`.
///
/// Fails with [`Error::StarViolation`] if m vanishes inside the window.
pub fn solve_jacobi(spec: &CurvatureSpec, r_max: f64, tol: f64) -> Result<PlaneProfile> {
    spec.validate()?;
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::InvalidInput(format!("r_max must be positive and finite, got {r_max}")));
    }
    if !(tol > 1e-14 && tol < 1e-3) {
        return Err(Error::InvalidInput(format!("tol must lie in (1e-14, 1e-3), got {tol}")));
    }
    if r_max > spec.domain_end() {
        return Err(Error::Domain { r: r_max, lo: 0.0, hi: spec.domain_end() });
    }
    let opts = ode::Options { rtol: tol, atol: tol * 1e-2, h_max: H_MAX, max_steps: 10_000_000 };
    let rhs = |r: f64, y: &[f64; 2]| [y[1], -spec.eval_unchecked(r) * y[0]];
    let star = |_: f64, y: &[f64; 2]| y[0];
    let sol = ode::solve(rhs, 0.0, [0.0, 1.0], r_max, &spec.breakpoints(), &opts, &[&star]);
    match sol.outcome {
        Outcome::Completed => {}
        Outcome::Event { t, .. } => return Err(Error::StarViolation { first_zero: t }),
        Outcome::MaxSteps { t } => return Err(Error::Integration(format!("step budget exhausted at r = {t}"))),
    }
    let mut profile = PlaneProfile {
        spec: spec.clone(),
        r_max,
        backing: Backing::Ode(sol.dense),
        diagnostics: placeholder_diagnostics(tol),
    };
    profile.diagnostics = profile.compute_diagnostics(tol)?;
    Ok(profile)
}

fn placeholder_diagnostics(tol: f64) -> Diagnostics {
    Diagnostics {
        von_mangoldt: false,
        vm_first_violation: None,
        nonnegative_curvature: false,
        min_m: f64::NAN,
        min_m_at: f64::NAN,
        m_end: f64::NAN,
        mp_end: f64::NAN,
        steps: 0,
        tol,
    }
}

impl PlaneProfile {
    /// Builds a table-backed profile from samples of (r, m, m', K), as written by
    /// [`crate::io::write_profile_csv`]. The curvature becomes a held table.
    pub fn from_samples(r: Vec<f64>, m: Vec<f64>, mp: Vec<f64>, k: Vec<f64>, tol: f64) -> Result<Self> {
        let n = r.len();
        if n < 2 || m.len() != n || mp.len() != n || k.len() != n {
            return Err(Error::InvalidInput("profile samples need at least two rows of equal length".into()));
        }
        if r[0] != 0.0 || m[0] != 0.0 {
            return Err(Error::InvalidInput("profile samples must start at r = 0 with m = 0".into()));
        }
        if let Some(i) = (1..n).find(|&i| !(m[i] > 0.0)) {
            return Err(Error::StarViolation { first_zero: r[i] });
        }
        let table = Table::new(r.clone(), k.clone(), Extrapolate::Hold)?;
        let r_max = r[n - 1];
        let mut profile = PlaneProfile {
            spec: CurvatureSpec::Table(table),
            r_max,
            backing: Backing::Samples(Samples { r, m, mp, k }),
            diagnostics: placeholder_diagnostics(tol),
        };
        profile.diagnostics = profile.compute_diagnostics(tol)?;
        Ok(profile)
    }

    fn compute_diagnostics(&self, tol: f64) -> Result<Diagnostics> {
        let grid = (self.r_max / 20_000.0).clamp(1e-4, 0.01);
        let vm = check_von_mangoldt(&self.spec, self.r_max, grid)?;
        let mut nonneg = self.sample_points(0.0, self.r_max).iter().all(|&r| self.curvature(r) >= 0.0);
        if let Some((_, k_tail)) = self.spec.tail_constant_from() {
            nonneg &= k_tail >= 0.0;
        }
        let delta = (0.1f64).min(self.r_max / 10.0);
        let (min_at, min_m) = self.min_m(delta, self.r_max);
        let [m_end, mp_end] = self.state(self.r_max);
        Ok(Diagnostics {
            von_mangoldt: vm.is_vm,
            vm_first_violation: vm.first_violation,
            nonnegative_curvature: nonneg,
            min_m,
            min_m_at: min_at,
            m_end,
            mp_end,
            steps: match &self.backing {
                Backing::Ode(d) => d.step_count(),
                Backing::Samples(s) => s.r.len() - 1,
            },
            tol,
        })
    }

    pub fn spec(&self) -> &CurvatureSpec {
        &self.spec
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn diagnostics(&self) -> &Diagnostics {
        &self.diagnostics
    }

    pub fn is_von_mangoldt(&self) -> bool {
        self.diagnostics.von_mangoldt
    }

    pub fn tol(&self) -> f64 {
        self.diagnostics.tol
    }

    /// (m, m') at r, clamped to the window.
    pub fn state(&self, r: f64) -> [f64; 2] {
        let r = r.clamp(0.0, self.r_max);
        match &self.backing {
            Backing::Ode(d) => d.eval(r),
            Backing::Samples(s) => s.eval(r),
        }
    }

    pub fn m(&self, r: f64) -> f64 {
        self.state(r)[0]
    }

    pub fn mp(&self, r: f64) -> f64 {
        self.state(r)[1]
    }

    /// m'' = −K m.
    pub fn mpp(&self, r: f64) -> f64 {
        -self.curvature(r) * self.m(r)
    }

    pub fn curvature(&self, r: f64) -> f64 {
        self.spec.eval_unchecked(r.max(0.0))
    }

    fn check_window(&self, r: f64) -> Result<()> {
        if r >= 0.0 && r <= self.r_max {
            Ok(())
        } else {
            Err(Error::Domain { r, lo: 0.0, hi: self.r_max })
        }
    }

    pub fn eval_m(&self, r: f64) -> Result<f64> {
        self.check_window(r)?;
        Ok(self.m(r))
    }

    pub fn eval_mp(&self, r: f64) -> Result<f64> {
        self.check_window(r)?;
        Ok(self.mp(r))
    }

    /// Derivative of the dense m' interpolant, for residual checks.
    pub fn interpolant_mpp(&self, r: f64) -> f64 {
        match &self.backing {
            Backing::Ode(d) => d.eval_derivative(r.clamp(0.0, self.r_max))[1],
            Backing::Samples(_) => self.mpp(r),
        }
    }

    /// Integrator nodes (or table knots) in [a, b], with midpoints and both ends.
    pub fn sample_points(&self, a: f64, b: f64) -> Vec<f64> {
        let knots: Vec<f64> = match &self.backing {
            Backing::Ode(d) => d.nodes(),
            Backing::Samples(s) => s.r.clone(),
        };
        let mut pts = vec![a];
        let mut prev = a;
        for &x in knots.iter().filter(|x| **x > a && **x < b) {
            pts.push(0.5 * (prev + x));
            pts.push(x);
            prev = x;
        }
        pts.push(0.5 * (prev + b));
        pts.push(b);
        pts
    }

    /// Minimum of m on [a, b] as `(argmin, min)`.
    pub fn min_m(&self, a: f64, b: f64) -> (f64, f64) {
        self.extremum(a, b, |r| self.m(r), |r| self.mp(r), false)
    }

    /// Maximum of m' on [a, b] as `(argmax, max)`.
    pub fn max_mp(&self, a: f64, b: f64) -> (f64, f64) {
        self.extremum(a, b, |r| self.mp(r), |r| self.mpp(r), true)
    }

    /// Minimum of m' on [a, b] as `(argmin, min)`.
    pub fn min_mp(&self, a: f64, b: f64) -> (f64, f64) {
        self.extremum(a, b, |r| self.mp(r), |r| self.mpp(r), false)
    }

    // Scans the sample points for interior critical points of `f` (sign
    // changes of `df`) and compares them with the endpoints.
    fn extremum(&self, a: f64, b: f64, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, maximize: bool) -> (f64, f64) {
        let better = |x: f64, y: f64| if maximize { x > y } else { x < y };
        let pts = self.sample_points(a, b);
        let mut best = (a, f(a));
        let mut d_prev = df(pts[0]);
        for w in pts.windows(2) {
            let v = f(w[1]);
            if better(v, best.1) {
                best = (w[1], v);
            }
            let d = df(w[1]);
            let turning = if maximize { d_prev > 0.0 && d <= 0.0 } else { d_prev < 0.0 && d >= 0.0 };
            if turning {
                if let Some(x) = find_root(&df, w[0], w[1], 1e-13 * w[1].abs().max(1.0)) {
                    let v = f(x);
                    if better(v, best.1) {
                        best = (x, v);
                    }
                }
            }
            d_prev = d;
        }
        best
    }

    /// Solves m(r) = y for r in [lo, hi], assuming m(lo) ≤ y ≤ m(hi).
    pub fn inverse_m(&self, y: f64, lo: f64, hi: f64) -> Option<f64> {
        find_root(|r| self.m(r) - y, lo, hi, 4e-16 * hi.abs().max(1.0))
    }

    /// What is known about m beyond r_max.
    pub fn tail_model(&self) -> TailModel {
        let s = self.mp(self.r_max);
        if !(s > 0.0) {
            return TailModel::Unknown;
        }
        if let Some(rc) = self.spec.resonant_tail_from().filter(|rc| *rc <= self.r_max) {
            let x = self.r_max + 1.0;
            let m = self.m(self.r_max);
            let b = x.sqrt() * s - m / (2.0 * x.sqrt());
            let a = m / x.sqrt() - b * x.ln();
            if b > 0.0 && a + b * x.ln() > 0.0 && rc >= 0.0 {
                return TailModel::Resonant { a, b };
            }
        }
        if let Some((rc, k)) = self.spec.tail_constant_from() {
            if rc <= self.r_max && k == 0.0 {
                return TailModel::Linear { slope: s };
            }
        }
        if self.is_von_mangoldt() && self.spec.tail_is_known() && self.curvature(self.r_max) <= 0.0 {
            return TailModel::Convex { slope_min: s };
        }
        TailModel::Unknown
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SturmReport {
    pub m2_ge_m1: bool,
    /// Checked only where m1' ≥ 0, which is where the comparison makes a claim.
    pub mp2_ge_mp1: bool,
    pub first_violation: Option<f64>,
}

/// Compares two profiles on their common window. Intended for K2 ≤ K1, where
/// m2 ≥ m1 everywhere and m2' ≥ m1' wherever m1' ≥ 0.
pub fn sturm_compare(p1: &PlaneProfile, p2: &PlaneProfile) -> Result<SturmReport> {
    let (a, b) = (p1.r_max, p2.r_max);
    if (a - b).abs() > 1e-12 * a.max(b) {
        return Err(Error::InvalidInput(format!("incompatible windows: r_max {a} vs {b}")));
    }
    let slack = 10.0 * p1.tol().max(p2.tol());
    let mut pts = p1.sample_points(0.0, a);
    pts.extend(p2.sample_points(0.0, a));
    pts.sort_by(|x, y| x.total_cmp(y));
    pts.dedup();
    let mut report = SturmReport { m2_ge_m1: true, mp2_ge_mp1: true, first_violation: None };
    for r in pts {
        let [m1, mp1] = p1.state(r);
        let [m2, mp2] = p2.state(r);
        let bad_m = m2 < m1 - slack * (1.0 + m1.abs());
        let bad_mp = mp1 >= 0.0 && mp2 < mp1 - slack * (1.0 + m1.abs());
        if bad_m {
            report.m2_ge_m1 = false;
        }
        if bad_mp {
            report.mp2_ge_mp1 = false;
        }
        if (bad_m || bad_mp) && report.first_violation.is_none() {
            report.first_violation = Some(r);
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedPoint {
    pub s: f64,
    pub x: f64,
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Embedding {
    Curve { points: Vec<EmbeddedPoint> },
    NotEmbeddable { witness: f64 },
}

/// Profile curve of the surface of revolution in R³: x(s) = m(s) and
/// z(s) = ∫₀ˢ √(1 − m'²), sampled at `samples + 1` equally spaced radii.
pub fn embed_profile(profile: &PlaneProfile, samples: usize) -> Embedding {
    let limit = 1.0 + 1e-9;
    let r_max = profile.r_max();
    if let Some(&w) = profile.sample_points(0.0, r_max).iter().find(|&&r| profile.mp(r).abs() > limit) {
        // Walk back to the first radius where the bound fails.
        let mut lo = 0.0;
        let mut hi = w;
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if profile.extremum_abs_mp(0.0, mid) > limit {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-12 {
                break;
            }
        }
        return Embedding::NotEmbeddable { witness: hi };
    }
    let (_, max_mp) = profile.max_mp(0.0, r_max);
    let (_, min_mp) = profile.min_mp(0.0, r_max);
    if max_mp > limit || min_mp < -limit {
        let w = if max_mp > limit { profile.max_mp(0.0, r_max).0 } else { profile.min_mp(0.0, r_max).0 };
        return Embedding::NotEmbeddable { witness: w };
    }
    let n = samples.max(1);
    let integrand = |s: f64| (1.0 - profile.mp(s).powi(2)).max(0.0).sqrt();
    let mut z = 0.0;
    let mut points = vec![EmbeddedPoint { s: 0.0, x: profile.m(0.0), z: 0.0 }];
    for i in 1..=n {
        let a = r_max * (i - 1) as f64 / n as f64;
        let b = r_max * i as f64 / n as f64;
        z += integrate_adaptive(&integrand, a, b, 1e-12, 200).value;
        points.push(EmbeddedPoint { s: b, x: profile.m(b), z });
    }
    Embedding::Curve { points }
}

impl PlaneProfile {
    fn extremum_abs_mp(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return self.mp(a).abs();
        }
        self.max_mp(a, b).1.max(-self.min_mp(a, b).1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeEstimate {
    pub estimate: f64,
    /// |m'(r_max) − m'(r_max/2)|.
    pub error_indicator: f64,
    /// The window-end curvature is negative on a von Mangoldt plane with a
    /// known tail, so m' grows without bound.
    pub unbounded: bool,
    /// m' is eventually monotone (von Mangoldt, or K ≥ 0 on the window).
    pub reliable: bool,
    pub window_limited: bool,
}

/// m'(∞) estimated at the window end, with a two-scale error indicator.
pub fn slope_at_infinity(profile: &PlaneProfile, tol: f64) -> SlopeEstimate {
    let r = profile.r_max();
    let d = profile.diagnostics();
    let unbounded = d.von_mangoldt && profile.spec().tail_is_known() && profile.curvature(r) < 0.0;
    let tail = profile.tail_model();
    let exact_tail = matches!(tail, TailModel::Linear { .. } | TailModel::Resonant { .. });
    let (estimate, error_indicator) = match tail {
        // m' = (L/2 + b)/√(r+1) → 0; what remains beyond the window is m'(r_max).
        TailModel::Resonant { .. } => (0.0, profile.mp(r)),
        _ => (profile.mp(r), (profile.mp(r) - profile.mp(0.5 * r)).abs()),
    };
    SlopeEstimate {
        estimate,
        error_indicator,
        unbounded,
        reliable: d.von_mangoldt || d.nonnegative_curvature,
        window_limited: !unbounded && !exact_tail && error_indicator > tol,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TotalCurvature {
    /// 2π(1 − m'(∞)); −∞ when m' is unbounded.
    #[serde(with = "crate::io::ext_f64")]
    pub by_slope: f64,
    /// 2π ∫₀^{r_max} K m dr over the window.
    pub by_integral: f64,
    pub integral_error: f64,
    pub consistent: bool,
}

/// Total curvature by the slope route and by direct integration over the window.
pub fn total_curvature(profile: &PlaneProfile, tol: f64) -> TotalCurvature {
    let slope = slope_at_infinity(profile, tol);
    let two_pi = 2.0 * std::f64::consts::PI;
    let by_slope = if slope.unbounded { f64::NEG_INFINITY } else { two_pi * (1.0 - slope.estimate) };
    let pts = profile.sample_points(0.0, profile.r_max());
    let mut integral = 0.0;
    let mut err = 0.0;
    let f = |r: f64| profile.curvature(r) * profile.m(r);
    let mut cuts: Vec<f64> = pts.iter().copied().step_by(8).collect();
    cuts.push(profile.r_max());
    cuts.dedup();
    for w in cuts.windows(2) {
        let q = integrate_adaptive(&f, w[0], w[1], 1e-12 * (1.0 + profile.m(w[1])), 100);
        integral += q.value;
        err += q.abs_error;
    }
    let by_integral = two_pi * integral;
    let integral_error = two_pi * err;
    let consistent = if slope.unbounded {
        by_integral < 0.0
    } else {
        (by_slope - by_integral).abs()
            <= two_pi * slope.error_indicator + integral_error + 1e-6 * (1.0 + by_integral.abs())
    };
    TotalCurvature { by_slope, by_integral, integral_error, consistent }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::DropParams;

    fn solve(spec: CurvatureSpec, r_max: f64) -> PlaneProfile {
        solve_jacobi(&spec, r_max, 1e-11).unwrap()
    }

    #[test]
    fn flat_plane_is_identity() {
        let p = solve(CurvatureSpec::constant(0.0), 10.0);
        assert!((p.eval_m(2.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((p.eval_m(3.0).unwrap() - 3.0).abs() < 1e-12);
        assert!((p.eval_mp(3.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(p.eval_m(10.5).is_err());
    }

    #[test]
    fn hyperbolic_plane() {
        let p = solve(CurvatureSpec::constant(-1.0), 10.0);
        assert!((p.m(1.0) - 1f64.sinh()).abs() < 1e-10);
        assert!((p.mp(1.0) - 1f64.cosh()).abs() < 1e-10);
    }

    #[test]
    fn sphere_closes_up() {
        match solve_jacobi(&CurvatureSpec::constant(1.0), 10.0, 1e-11) {
            Err(Error::StarViolation { first_zero }) => {
                assert!((first_zero - std::f64::consts::PI).abs() < 1e-10)
            }
            other => panic!("expected StarViolation, got {other:?}"),
        }
    }

    #[test]
    fn ku_zero_closed_form() {
        let p = solve(CurvatureSpec::ku_family(0.0), 10.0);
        let m0 = |r: f64| (r + 1.0).ln() * (r + 1.0).sqrt();
        let m0p = |r: f64| (2.0 + (r + 1.0).ln()) / (2.0 * (r + 1.0).sqrt());
        assert!((p.m(1.0) - m0(1.0)).abs() < 1e-10);
        assert!((p.mp(1.0) - m0p(1.0)).abs() < 1e-10);
    }

    #[test]
    fn sturm_examples() {
        let flat = solve(CurvatureSpec::constant(0.0), 8.0);
        let hyp = solve(CurvatureSpec::constant(-1.0), 8.0);
        let rep = sturm_compare(&flat, &hyp).unwrap();
        assert!(rep.m2_ge_m1 && rep.mp2_ge_mp1);
        let rev = sturm_compare(&hyp, &flat).unwrap();
        assert!(!rev.m2_ge_m1);
        let same = sturm_compare(&flat, &flat).unwrap();
        assert!(same.m2_ge_m1 && same.mp2_ge_mp1 && same.first_violation.is_none());
        let short = solve(CurvatureSpec::constant(0.0), 5.0);
        assert!(sturm_compare(&flat, &short).is_err());
    }

    #[test]
    fn embedding_examples() {
        let flat = solve(CurvatureSpec::constant(0.0), 5.0);
        match embed_profile(&flat, 10) {
            Embedding::Curve { points } => assert!(points.iter().all(|p| p.z.abs() < 1e-12)),
            e => panic!("{e:?}"),
        }
        let hyp = solve(CurvatureSpec::constant(-1.0), 5.0);
        match embed_profile(&hyp, 10) {
            Embedding::NotEmbeddable { witness } => assert!(witness < 1e-3),
            e => panic!("{e:?}"),
        }
        let cap = solve(CurvatureSpec::constant(1.0), 1.0);
        match embed_profile(&cap, 20) {
            Embedding::Curve { points } => {
                for p in points {
                    assert!((p.z - (1.0 - p.s.cos())).abs() < 1e-9, "s={}", p.s);
                }
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn slope_and_total_curvature() {
        let flat = solve(CurvatureSpec::constant(0.0), 10.0);
        let s = slope_at_infinity(&flat, 1e-8);
        assert!((s.estimate - 1.0).abs() < 1e-12 && s.error_indicator < 1e-12);
        let tc = total_curvature(&flat, 1e-8);
        assert!(tc.by_slope.abs() < 1e-9 && tc.by_integral.abs() < 1e-9 && tc.consistent);

        let hyp = solve(CurvatureSpec::constant(-1.0), 10.0);
        let tc = total_curvature(&hyp, 1e-8);
        assert_eq!(tc.by_slope, f64::NEG_INFINITY);
        assert!(tc.by_integral < -1e4);
    }

    #[test]
    fn tail_models() {
        let flat = solve(CurvatureSpec::constant(0.0), 10.0);
        assert!(matches!(flat.tail_model(), TailModel::Linear { .. }));
        let hyp = solve(CurvatureSpec::constant(-1.0), 5.0);
        assert!(matches!(hyp.tail_model(), TailModel::Convex { .. }));
        let k0 = solve(CurvatureSpec::ku_family(0.0), 10.0);
        match k0.tail_model() {
            // m = ln(r+1)√(r+1) exactly: a = 0, b = 1.
            TailModel::Resonant { a, b } => assert!(a.abs() < 1e-8 && (b - 1.0).abs() < 1e-8, "{a} {b}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn diagnostics_flags() {
        let p = solve(CurvatureSpec::spliced(CurvatureSpec::constant(1.0), 2.0, DropParams::new(5.0, 0.5)), 8.0);
        let d = p.diagnostics();
        assert!(d.von_mangoldt);
        assert!(!d.nonnegative_curvature);
        assert!(d.min_m > 0.0);
    }
}
