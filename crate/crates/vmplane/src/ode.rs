//! Dormand–Prince 5(4) integrator with continuous output and terminal events.
//!
//! The state is a fixed-size array so the Jacobi system (`N = 2`) and the
//! geodesic system (`N = 3`) share one implementation without allocation in
//! the inner loop. Steps never cross a declared stop, which lets callers place
//! stops at the kinks of a piecewise curvature.

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Shampine's dense-output weights as used in Hairer's DOPRI5.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { rtol: 1e-10, atol: 1e-12, h_max: f64::INFINITY, max_steps: 2_000_000 }
    }
}

#[derive(Clone, Debug)]
struct Segment<const N: usize> {
    t0: f64,
    h: f64,
    rc: [[f64; N]; 5],
}

impl<const N: usize> Segment<N> {
    fn eval(&self, t: f64) -> [f64; N] {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let mut y = [0.0; N];
        for i in 0..N {
            let rc = &self.rc;
            y[i] = rc[0][i] + th * (rc[1][i] + th1 * (rc[2][i] + th * (rc[3][i] + th1 * rc[4][i])));
        }
        y
    }

    fn eval_derivative(&self, t: f64) -> [f64; N] {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let mut d = [0.0; N];
        for i in 0..N {
            let rc = &self.rc;
            let a = rc[3][i] + th1 * rc[4][i];
            let da = -rc[4][i];
            let b = rc[2][i] + th * a;
            let db = a + th * da;
            let c = rc[1][i] + th1 * b;
            let dc = -b + th1 * db;
            d[i] = (c + th * dc) / self.h;
        }
        d
    }
}

/// Piecewise quartic interpolant over the accepted steps.
#[derive(Clone, Debug)]
pub struct DenseSolution<const N: usize> {
    segs: Vec<Segment<N>>,
    t_end: f64,
    y_end: [f64; N],
}

impl<const N: usize> DenseSolution<N> {
    pub fn t_start(&self) -> f64 {
        self.segs.first().map_or(self.t_end, |s| s.t0)
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn y_end(&self) -> [f64; N] {
        self.y_end
    }

    pub fn step_count(&self) -> usize {
        self.segs.len()
    }

    /// Left endpoints of the accepted steps followed by the final time.
    pub fn nodes(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.segs.iter().map(|s| s.t0).collect();
        v.push(self.t_end);
        v
    }

    /// Evaluates the interpolant; `t` is clamped to the integrated range.
    pub fn eval(&self, t: f64) -> [f64; N] {
        if self.segs.is_empty() || t >= self.t_end {
            return self.y_end;
        }
        let idx = self.segs.partition_point(|s| s.t0 <= t);
        let seg = &self.segs[idx.saturating_sub(1)];
        seg.eval(t.max(seg.t0))
    }

    /// Derivative of the interpolant in `t`.
    pub fn eval_derivative(&self, t: f64) -> [f64; N] {
        if self.segs.is_empty() {
            return [0.0; N];
        }
        let t = t.min(self.t_end);
        let idx = self.segs.partition_point(|s| s.t0 <= t);
        let seg = &self.segs[idx.saturating_sub(1)];
        seg.eval_derivative(t.max(seg.t0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Outcome {
    Completed,
    /// A terminal event fired; `index` refers to the slice passed to [`solve`].
    Event {
        index: usize,
        t: f64,
    },
    MaxSteps {
        t: f64,
    },
}

#[derive(Clone, Debug)]
pub struct Solution<const N: usize> {
    pub dense: DenseSolution<N>,
    pub outcome: Outcome,
    pub rejected: usize,
}

pub type EventFn<'a, const N: usize> = &'a dyn Fn(f64, &[f64; N]) -> f64;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (a, k) in terms {
        for i in 0..N {
            out[i] += h * a * k[i];
        }
    }
    out
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end > t0`.
///
/// Steps end exactly on every entry of `stops` inside the interval. Each event
/// function is terminal: integration halts at the first sign change of any of
/// them, located on the interpolant to about 1e-13 relative. A zero at the
/// initial point does not count as a crossing.
pub fn solve<const N: usize, F>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    stops: &[f64],
    opts: &Options,
    events: &[EventFn<'_, N>],
) -> Solution<N>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut stops: Vec<f64> = stops.iter().copied().filter(|s| *s > t0 && *s < t_end).collect();
    stops.sort_by(|a, b| a.total_cmp(b));
    stops.push(t_end);
    let mut next_stop = 0;

    let mut segs: Vec<Segment<N>> = Vec::new();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut g_prev: Vec<f64> = events.iter().map(|g| g(t, &y)).collect();
    let span = t_end - t0;
    let mut h = (1e-3 * span.max(1e-3)).min(opts.h_max).min(span);
    let mut rejected = 0;
    let mut steps = 0;

    while t < t_end {
        if steps >= opts.max_steps {
            return Solution {
                dense: DenseSolution { segs, t_end: t, y_end: y },
                outcome: Outcome::MaxSteps { t },
                rejected,
            };
        }
        let stop = stops[next_stop];
        let mut landing = false;
        if t + h >= stop - 1e-12 * stop.abs().max(1.0) {
            h = stop - t;
            landing = true;
        }

        let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(t + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(t + h, &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let t_new = if landing { stop } else { t + h };
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(t_new, &y_new);

        let mut err = 0.0;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sc) * (e / sc);
        }
        err = (err / N as f64).sqrt();
        steps += 1;

        if !err.is_finite() || err > 1.0 {
            rejected += 1;
            let fac = if err.is_finite() { (0.9 * err.powf(-0.2)).max(0.2) } else { 0.2 };
            h *= fac;
            if h < 1e-14 * t.abs().max(1.0) {
                return Solution {
                    dense: DenseSolution { segs, t_end: t, y_end: y },
                    outcome: Outcome::MaxSteps { t },
                    rejected,
                };
            }
            continue;
        }

        let mut rc = [[0.0; N]; 5];
        for i in 0..N {
            let ydiff = y_new[i] - y[i];
            let bspl = h * k1[i] - ydiff;
            rc[0][i] = y[i];
            rc[1][i] = ydiff;
            rc[2][i] = bspl;
            rc[3][i] = ydiff - h * k7[i] - bspl;
            rc[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }
        let seg = Segment { t0: t, h, rc };

        // Earliest sign change among the events within this step.
        let mut hit: Option<(usize, f64)> = None;
        let mut g_new = Vec::with_capacity(events.len());
        for (idx, g) in events.iter().enumerate() {
            let gv = g(t_new, &y_new);
            g_new.push(gv);
            let gp = g_prev[idx];
            let crossed = (gp < 0.0 && gv >= 0.0) || (gp > 0.0 && gv <= 0.0);
            if crossed {
                let te = locate(|s| g(s, &seg.eval(s)), t, gp, t_new, gv);
                if hit.is_none_or(|(_, th)| te < th) {
                    hit = Some((idx, te));
                }
            }
        }
        if let Some((index, te)) = hit {
            let ye = seg.eval(te);
            segs.push(seg);
            return Solution {
                dense: DenseSolution { segs, t_end: te, y_end: ye },
                outcome: Outcome::Event { index, t: te },
                rejected,
            };
        }
        // A zero at the start carries no sign; adopt the first nonzero value.
        for (gp, gv) in g_prev.iter_mut().zip(g_new) {
            *gp = gv;
        }

        segs.push(seg);
        t = t_new;
        y = y_new;
        if landing {
            next_stop += 1;
            k1 = f(t, &y);
        } else {
            k1 = k7;
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * fac).min(opts.h_max);
    }

    Solution { dense: DenseSolution { segs, t_end: t, y_end: y }, outcome: Outcome::Completed, rejected }
}

/// Illinois-modified regula falsi on a bracketed sign change.
fn locate(g: impl Fn(f64) -> f64, mut a: f64, mut ga: f64, mut b: f64, mut gb: f64) -> f64 {
    if gb == 0.0 {
        return b;
    }
    let tol = 1e-13 * a.abs().max(b.abs()).max(1.0);
    let mut side = 0;
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let mut m = (a * gb - b * ga) / (gb - ga);
        if !(m > a.min(b) && m < a.max(b)) {
            m = 0.5 * (a + b);
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm < 0.0) == (gb < 0.0) {
            b = m;
            gb = gm;
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        } else {
            a = m;
            ga = gm;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        }
    }
    // Report the point on the far side of the crossing.
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_matches_sin_cos() {
        let opts = Options { rtol: 1e-12, atol: 1e-14, ..Default::default() };
        let sol = solve(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [0.0, 1.0], 3.0, &[], &opts, &[]);
        assert_eq!(sol.outcome, Outcome::Completed);
        for i in 0..=300 {
            let t = i as f64 * 0.01;
            let y = sol.dense.eval(t);
            assert!((y[0] - t.sin()).abs() < 1e-10, "t={t}");
            assert!((y[1] - t.cos()).abs() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn event_locates_first_zero_of_sine() {
        let opts = Options { rtol: 1e-12, atol: 1e-14, ..Default::default() };
        let ev = |_: f64, y: &[f64; 2]| y[0];
        let sol = solve(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [0.0, 1.0], 10.0, &[], &opts, &[&ev]);
        match sol.outcome {
            Outcome::Event { index: 0, t } => assert!((t - std::f64::consts::PI).abs() < 1e-10),
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn stops_are_hit_exactly() {
        let opts = Options::default();
        let sol = solve(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], 2.0, &[0.7, 1.3], &opts, &[]);
        let nodes = sol.dense.nodes();
        assert!(nodes.contains(&0.7) && nodes.contains(&1.3));
        assert!((sol.dense.y_end()[0] - 2f64.exp()).abs() < 1e-8);
    }

    #[test]
    fn h_max_bounds_the_step() {
        let opts = Options { h_max: 0.25, ..Default::default() };
        let sol = solve(|_, _: &[f64; 1]| [1.0], 0.0, [0.0], 10.0, &[], &opts, &[]);
        assert!(sol.dense.step_count() >= 40);
        assert!((sol.dense.eval(7.3)[0] - 7.3).abs() < 1e-12);
    }
}
