//! Curvature functions K(r) on [0, ∞) and the von Mangoldt (non-increasing) check.
//!
//! Builtin kinds serialize as `{"kind": ..., "params": {...}}`. An
//! [`Expression`] wraps an arbitrary closure and cannot be serialized.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Increases of K smaller than this between neighbouring samples count as roundoff.
pub const VM_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum CurvatureSpec {
    Constant {
        k: f64,
    },
    /// K_u(r) = 1/(4(r+1)²) − u with u in [0, 1/4].
    KuFamily {
        u: f64,
    },
    /// max(K_u, 0) with the corner at z_u smoothed over [z_u − ε, z_u + ε].
    SmoothedKu {
        u: f64,
        epsilon: f64,
    },
    /// `base` on [0, r0], then `base − μ·S((r − r0)/w)` with a monotone smoothstep S.
    Spliced {
        base: Box<CurvatureSpec>,
        r0: f64,
        drop: DropParams,
    },
    Table(Table),
    #[serde(skip)]
    Expression(Expression),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DropParams {
    /// μ > 0, in curvature units.
    pub depth: f64,
    /// w > 0, in length units.
    pub width: f64,
}

impl DropParams {
    pub fn new(depth: f64, width: f64) -> Self {
        DropParams { depth, width }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extrapolate {
    /// Hold the last sample value beyond the final knot.
    #[default]
    Hold,
    /// Evaluation beyond the final knot is a domain error.
    None,
}

/// Sampled curvature with monotone piecewise-cubic (Fritsch–Butland) interpolation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub r: Vec<f64>,
    pub k: Vec<f64>,
    #[serde(default)]
    pub extrapolate: Extrapolate,
}

/// A user-supplied curvature closure.
#[derive(Clone)]
pub struct Expression {
    pub label: String,
    /// Upper end of the domain; `None` means all of [0, ∞).
    pub domain_end: Option<f64>,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl Expression {
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Expression { label: label.into(), domain_end: None, f: Arc::new(f) }
    }

    pub fn with_domain_end(mut self, end: f64) -> Self {
        self.domain_end = Some(end);
        self
    }
}

impl fmt::Debug for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Expression")
            .field("label", &self.label)
            .field("domain_end", &self.domain_end)
            .finish_non_exhaustive()
    }
}

impl PartialEq for Expression {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.f, &other.f) && self.domain_end == other.domain_end
    }
}

/// The root z_u = 1/(2√u) − 1 of K_u; infinite for u = 0.
pub fn ku_zero(u: f64) -> f64 {
    if u <= 0.0 {
        f64::INFINITY
    } else {
        0.5 / u.sqrt() - 1.0
    }
}

fn ku(u: f64, r: f64) -> f64 {
    0.25 / ((r + 1.0) * (r + 1.0)) - u
}

/// Quintic smoothstep 6t⁵ − 15t⁴ + 10t³, clamped to [0, 1].
pub fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
    }
}

/// Quintic on [z−ε, z+ε] matching K_u to second order at z−ε and vanishing
/// to second order at z+ε.
fn smoothed_ku(u: f64, eps: f64, r: f64) -> f64 {
    let z = ku_zero(u);
    let a = z - eps;
    if r <= a {
        return ku(u, r);
    }
    if r >= z + eps {
        return 0.0;
    }
    let h = 2.0 * eps;
    let t = (r - a) / h;
    let x = a + 1.0;
    let f0 = ku(u, a);
    let f1 = -0.5 / (x * x * x);
    let f2 = 1.5 / (x * x * x * x);
    let t2 = t * t;
    let t3 = t2 * t;
    let h0 = 1.0 - t3 * (10.0 - 15.0 * t + 6.0 * t2);
    let h1 = t - t3 * (6.0 - 8.0 * t + 3.0 * t2);
    let h2 = 0.5 * (t2 - t3 * (3.0 - 3.0 * t + t2));
    f0 * h0 + h * f1 * h1 + h * h * f2 * h2
}

impl Table {
    pub fn new(r: Vec<f64>, k: Vec<f64>, extrapolate: Extrapolate) -> Result<Self> {
        let t = Table { r, k, extrapolate };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        if self.r.len() < 2 || self.r.len() != self.k.len() {
            return Err(Error::InvalidInput("table needs at least two (r, K) pairs of equal length".into()));
        }
        if self.r[0] != 0.0 {
            return Err(Error::InvalidInput("table must start at r = 0".into()));
        }
        if self.r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("table radii must be strictly increasing".into()));
        }
        if self.r.iter().chain(&self.k).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("table entries must be finite".into()));
        }
        Ok(())
    }

    fn secant(&self, i: usize) -> f64 {
        (self.k[i + 1] - self.k[i]) / (self.r[i + 1] - self.r[i])
    }

    // Weighted harmonic mean of neighbouring secants, zero at local extrema.
    fn node_slope(&self, i: usize) -> f64 {
        let n = self.r.len();
        if i == 0 {
            return self.secant(0);
        }
        if i == n - 1 {
            return self.secant(n - 2);
        }
        let (d0, d1) = (self.secant(i - 1), self.secant(i));
        if d0 * d1 <= 0.0 {
            return 0.0;
        }
        let h0 = self.r[i] - self.r[i - 1];
        let h1 = self.r[i + 1] - self.r[i];
        let w1 = 2.0 * h1 + h0;
        let w2 = h1 + 2.0 * h0;
        (w1 + w2) / (w1 / d0 + w2 / d1)
    }

    fn eval(&self, r: f64) -> f64 {
        let n = self.r.len();
        if r >= self.r[n - 1] {
            return self.k[n - 1];
        }
        if r <= self.r[0] {
            return self.k[0];
        }
        let i = self.r.partition_point(|x| *x <= r) - 1;
        let h = self.r[i + 1] - self.r[i];
        let t = (r - self.r[i]) / h;
        let (m0, m1) = (self.node_slope(i), self.node_slope(i + 1));
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.k[i]
            + (t3 - 2.0 * t2 + t) * h * m0
            + (-2.0 * t3 + 3.0 * t2) * self.k[i + 1]
            + (t3 - t2) * h * m1
    }
}

impl CurvatureSpec {
    pub fn constant(k: f64) -> Self {
        CurvatureSpec::Constant { k }
    }

    pub fn ku_family(u: f64) -> Self {
        CurvatureSpec::KuFamily { u }
    }

    pub fn smoothed_ku(u: f64, epsilon: f64) -> Self {
        CurvatureSpec::SmoothedKu { u, epsilon }
    }

    pub fn spliced(base: CurvatureSpec, r0: f64, drop: DropParams) -> Self {
        CurvatureSpec::Spliced { base: Box::new(base), r0, drop }
    }

    pub fn expression(e: Expression) -> Self {
        CurvatureSpec::Expression(e)
    }

    /// Checks parameter ranges; called by the solver before integrating.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        match self {
            CurvatureSpec::Constant { k } if !k.is_finite() => bad(format!("constant k = {k}")),
            CurvatureSpec::KuFamily { u } if !(0.0..=0.25).contains(u) => {
                bad(format!("ku_family requires u in [0, 1/4], got {u}"))
            }
            CurvatureSpec::SmoothedKu { u, epsilon } => {
                if !(*u > 0.0 && *u <= 0.25) {
                    return bad(format!("smoothed_ku requires u in (0, 1/4], got {u}"));
                }
                let z = ku_zero(*u);
                if !(*epsilon > 0.0 && *epsilon <= z) {
                    return bad(format!("smoothed_ku requires 0 < epsilon <= z_u = {z}"));
                }
                Ok(())
            }
            CurvatureSpec::Spliced { base, r0, drop } => {
                base.validate()?;
                if !(*r0 >= 0.0 && r0.is_finite()) {
                    return bad(format!("splice radius {r0} must be finite and non-negative"));
                }
                if !(drop.depth >= 0.0 && drop.depth.is_finite()) {
                    return bad(format!("drop depth {} must be non-negative", drop.depth));
                }
                if !(drop.width > 0.0 && drop.width.is_finite()) {
                    return bad(format!("drop width {} must be positive", drop.width));
                }
                Ok(())
            }
            CurvatureSpec::Table(t) => t.validate(),
            _ => Ok(()),
        }
    }

    /// Upper end of the domain of definition.
    pub fn domain_end(&self) -> f64 {
        match self {
            CurvatureSpec::Table(t) if t.extrapolate == Extrapolate::None => *t.r.last().unwrap_or(&0.0),
            CurvatureSpec::Spliced { base, .. } => base.domain_end(),
            CurvatureSpec::Expression(e) => e.domain_end.unwrap_or(f64::INFINITY),
            _ => f64::INFINITY,
        }
    }

    /// K(r), with a domain check.
    pub fn eval(&self, r: f64) -> Result<f64> {
        let end = self.domain_end();
        if !(r >= 0.0 && r <= end) {
            return Err(Error::Domain { r, lo: 0.0, hi: end });
        }
        Ok(self.eval_unchecked(r))
    }

    /// K(r) without the domain check; tables hold their end values.
    pub fn eval_unchecked(&self, r: f64) -> f64 {
        match self {
            CurvatureSpec::Constant { k } => *k,
            CurvatureSpec::KuFamily { u } => ku(*u, r),
            CurvatureSpec::SmoothedKu { u, epsilon } => smoothed_ku(*u, *epsilon, r),
            CurvatureSpec::Spliced { base, r0, drop } => {
                let b = base.eval_unchecked(r);
                if r <= *r0 {
                    b
                } else {
                    b - drop.depth * smoothstep((r - r0) / drop.width)
                }
            }
            CurvatureSpec::Table(t) => t.eval(r),
            CurvatureSpec::Expression(e) => (e.f)(r),
        }
    }

    /// Radii where K is less smooth than elsewhere; the Jacobi solver steps onto them.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v = match self {
            CurvatureSpec::SmoothedKu { u, epsilon } => {
                let z = ku_zero(*u);
                vec![z - epsilon, z + epsilon]
            }
            CurvatureSpec::Spliced { base, r0, drop } => {
                let mut v = base.breakpoints();
                v.push(*r0);
                v.push(r0 + drop.width);
                v
            }
            CurvatureSpec::Table(t) => t.r.clone(),
            _ => Vec::new(),
        };
        v.retain(|x| *x > 0.0 && x.is_finite());
        v.sort_by(|a, b| a.total_cmp(b));
        v.dedup();
        v
    }

    /// `(r_c, k)` such that K ≡ k on [r_c, ∞), when that is known exactly.
    pub fn tail_constant_from(&self) -> Option<(f64, f64)> {
        match self {
            CurvatureSpec::Constant { k } => Some((0.0, *k)),
            CurvatureSpec::SmoothedKu { u, epsilon } => Some((ku_zero(*u) + epsilon, 0.0)),
            CurvatureSpec::Spliced { base, r0, drop } => {
                let (rb, kb) = base.tail_constant_from()?;
                Some((rb.max(r0 + drop.width), kb - drop.depth))
            }
            CurvatureSpec::Table(t) if t.extrapolate == Extrapolate::Hold => Some((*t.r.last()?, *t.k.last()?)),
            _ => None,
        }
    }

    /// r_c such that K = 1/(4(r+1)²) on [r_c, ∞), when that is known exactly.
    pub fn resonant_tail_from(&self) -> Option<f64> {
        match self {
            CurvatureSpec::KuFamily { u } if *u == 0.0 => Some(0.0),
            CurvatureSpec::SmoothedKu { u, .. } if *u == 0.0 => Some(0.0),
            _ => None,
        }
    }

    /// True when the representation itself guarantees K is non-increasing past
    /// any window (closed forms and held tables); false for opaque closures.
    pub fn tail_is_known(&self) -> bool {
        match self {
            CurvatureSpec::Expression(_) => false,
            CurvatureSpec::Spliced { base, .. } => base.tail_is_known(),
            CurvatureSpec::Table(t) => t.extrapolate == Extrapolate::Hold,
            _ => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VonMangoldtReport {
    pub is_vm: bool,
    pub first_violation: Option<f64>,
}

/// Samples K on a grid over [0, r_max] and refines cells where K is not
/// clearly decreasing. An increase above [`VM_TOLERANCE`] between any two
/// consecutive samples is a violation.
pub fn check_von_mangoldt(spec: &CurvatureSpec, r_max: f64, grid_step: f64) -> Result<VonMangoldtReport> {
    if !(r_max > 0.0) || !(grid_step > 0.0) {
        return Err(Error::InvalidInput("r_max and grid_step must be positive".into()));
    }
    let r_end = r_max.min(spec.domain_end());
    let n = ((r_end / grid_step).ceil() as usize).max(1);
    let mut grid: Vec<f64> = (0..=n).map(|i| (i as f64 * grid_step).min(r_end)).collect();
    // Kinks deserve their own samples.
    grid.extend(spec.breakpoints().into_iter().filter(|b| *b < r_end));
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup();

    const SUB: usize = 16;
    let mut prev_r = grid[0];
    let mut prev_k = spec.eval_unchecked(prev_r);
    for &r in &grid[1..] {
        let k = spec.eval_unchecked(r);
        let suspect = k > prev_k - 1e-9 * (r - prev_r);
        if suspect {
            let mut a = prev_r;
            let mut ka = prev_k;
            for j in 1..=SUB {
                let b = prev_r + (r - prev_r) * j as f64 / SUB as f64;
                let kb = spec.eval_unchecked(b);
                if kb > ka + VM_TOLERANCE {
                    return Ok(VonMangoldtReport { is_vm: false, first_violation: Some(a) });
                }
                a = b;
                ka = kb;
            }
        }
        prev_r = r;
        prev_k = k;
    }
    Ok(VonMangoldtReport { is_vm: true, first_violation: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(CurvatureSpec::constant(-1.0).eval(2.0).unwrap(), -1.0);
        assert!(CurvatureSpec::ku_family(1.0 / 16.0).eval(1.0).unwrap().abs() < 1e-16);
        assert_eq!(CurvatureSpec::ku_family(0.0).eval(0.0).unwrap(), 0.25);
    }

    #[test]
    fn ku_zero_closed_form() {
        assert_eq!(ku_zero(1.0 / 16.0), 1.0);
        assert!(ku_zero(0.0).is_infinite());
    }

    #[test]
    fn vm_examples() {
        let r = check_von_mangoldt(&CurvatureSpec::constant(0.0), 10.0, 0.1).unwrap();
        assert!(r.is_vm);
        let r = check_von_mangoldt(&CurvatureSpec::ku_family(0.1), 10.0, 0.1).unwrap();
        assert!(r.is_vm);
        let t = Table::new(vec![0.0, 1.0], vec![0.0, 1.0], Extrapolate::Hold).unwrap();
        let r = check_von_mangoldt(&CurvatureSpec::Table(t), 1.0, 0.1).unwrap();
        assert!(!r.is_vm);
        assert!(r.first_violation.unwrap() < 0.01);
    }

    #[test]
    fn smoothed_ku_is_c2_at_both_ends() {
        let (u, eps) = (0.01, 0.1);
        let spec = CurvatureSpec::smoothed_ku(u, eps);
        let z = ku_zero(u);
        let h = 1e-4;
        let a = z - eps;
        let d1 = |r: f64| (spec.eval_unchecked(r + h) - spec.eval_unchecked(r - h)) / (2.0 * h);
        assert!((spec.eval_unchecked(a) - ku(u, a)).abs() < 1e-15);
        assert!((d1(a) - (-0.5 / (a + 1.0).powi(3))).abs() < 1e-6);
        assert!(spec.eval_unchecked(z + eps).abs() < 1e-15);
        assert!(d1(z + eps).abs() < 1e-6);
        assert!(check_von_mangoldt(&spec, 3.0 * z, 1e-3).unwrap().is_vm);
    }

    #[test]
    fn spliced_drop_reaches_depth_and_is_monotone() {
        let spec = CurvatureSpec::spliced(CurvatureSpec::constant(1.0), 2.0, DropParams::new(3.0, 0.5));
        assert_eq!(spec.eval_unchecked(1.9), 1.0);
        assert_eq!(spec.eval_unchecked(2.5), -2.0);
        assert_eq!(spec.eval_unchecked(9.0), -2.0);
        assert_eq!(spec.tail_constant_from(), Some((2.5, -2.0)));
        assert!(check_von_mangoldt(&spec, 10.0, 0.01).unwrap().is_vm);
    }

    #[test]
    fn monotone_table_stays_monotone() {
        let r = vec![0.0, 0.5, 0.6, 2.0, 5.0];
        let k = vec![1.0, 0.9, 0.2, 0.2, -3.0];
        let spec = CurvatureSpec::Table(Table::new(r, k, Extrapolate::Hold).unwrap());
        assert!(check_von_mangoldt(&spec, 6.0, 1e-3).unwrap().is_vm);
        assert_eq!(spec.eval_unchecked(0.5), 0.9);
        assert_eq!(spec.eval_unchecked(7.0), -3.0);
    }

    #[test]
    fn table_domain_without_extrapolation() {
        let t = Table::new(vec![0.0, 1.0], vec![0.0, 0.0], Extrapolate::None).unwrap();
        let spec = CurvatureSpec::Table(t);
        assert!(spec.eval(0.5).is_ok());
        assert!(matches!(spec.eval(1.5), Err(Error::Domain { .. })));
        assert!(matches!(spec.eval(-0.1), Err(Error::Domain { .. })));
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        assert!(CurvatureSpec::ku_family(0.3).validate().is_err());
        assert!(CurvatureSpec::smoothed_ku(0.01, 0.0).validate().is_err());
        assert!(Table::new(vec![0.0, 0.0], vec![1.0, 1.0], Extrapolate::Hold).is_err());
    }

    #[test]
    fn expressions_do_not_serialize() {
        let spec = CurvatureSpec::expression(Expression::new("neg", |_| -1.0));
        assert!(serde_json::to_string(&spec).is_err());
        assert_eq!(spec.eval_unchecked(3.0), -1.0);
    }
}
