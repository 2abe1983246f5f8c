//! Limited-memory BFGS with box bounds.
//!
//! Variables sitting on a bound whose gradient pushes outward are frozen for
//! the step; the remaining free variables get a two-loop quasi-Newton
//! direction. Steps are capped at the box boundary and chosen by a
//! strong-Wolfe line search, so every accepted iterate satisfies sufficient
//! decrease. Convergence is measured by the max-norm of the projected
//! gradient `P(x - g) - x`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub struct LbfgsbOptions {
    /// Number of stored correction pairs.
    pub memory: usize,
    pub grad_tolerance: f64,
    pub max_iterations: usize,
    pub lower: f64,
    pub upper: f64,
    /// Sufficient-decrease constant.
    pub c1: f64,
    /// Curvature constant.
    pub c2: f64,
    pub max_line_search: usize,
}

impl Default for LbfgsbOptions {
    fn default() -> Self {
        Self {
            memory: 10,
            grad_tolerance: 1e-3,
            max_iterations: 1000,
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
            c1: 1e-4,
            c2: 0.9,
            max_line_search: 30,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Projected gradient max-norm below tolerance.
    Converged,
    MaxIterations,
    /// The line search could not find an acceptable step.
    LineSearchStalled,
    /// The objective or gradient produced NaN or infinity.
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub value: f64,
    pub grad_max_norm: f64,
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub gradient: Vec<f64>,
    pub grad_max_norm: f64,
    pub iterations: usize,
    pub termination: Termination,
    /// Entry 0 is the starting point, then one entry per accepted step.
    pub history: Vec<IterationRecord>,
    /// Objective evaluations including line-search trials.
    pub evaluations: usize,
    /// Lowest objective value seen at any evaluation.
    pub min_evaluated: f64,
}

struct Point {
    x: Vec<f64>,
    f: f64,
    g: Vec<f64>,
}

struct Evaluator<F> {
    f: F,
    count: usize,
    min_seen: f64,
}

impl<F: FnMut(&[f64]) -> (f64, Vec<f64>)> Evaluator<F> {
    fn eval(&mut self, x: Vec<f64>) -> Option<Point> {
        let (f, g) = (self.f)(&x);
        self.count += 1;
        if !f.is_finite() || g.iter().any(|v| !v.is_finite()) {
            return None;
        }
        self.min_seen = self.min_seen.min(f);
        Some(Point { x, f, g })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn projected_grad_norm(x: &[f64], g: &[f64], lo: f64, hi: f64) -> f64 {
    x.iter()
        .zip(g)
        .map(|(xi, gi)| ((xi - gi).clamp(lo, hi) - xi).abs())
        .fold(0.0, f64::max)
}

enum Search {
    Accepted(Point),
    Stalled,
    NonFinite,
}

/// Minimizes `f` starting from `x0` (projected into the box). `f` returns the
/// value and gradient.
pub fn minimize<F>(f: F, x0: &[f64], opts: &LbfgsbOptions) -> Minimum
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let (lo, hi) = (opts.lower, opts.upper);
    let mut ev = Evaluator { f, count: 0, min_seen: f64::INFINITY };
    let start: Vec<f64> = x0.iter().map(|v| v.clamp(lo, hi)).collect();

    let Some(mut cur) = ev.eval(start.clone()) else {
        return Minimum {
            gradient: vec![f64::NAN; start.len()],
            x: start,
            value: f64::NAN,
            grad_max_norm: f64::NAN,
            iterations: 0,
            termination: Termination::NonFinite,
            history: Vec::new(),
            evaluations: ev.count,
            min_evaluated: ev.min_seen,
        };
    };

    let mut pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(opts.memory);
    let mut pg = projected_grad_norm(&cur.x, &cur.g, lo, hi);
    let mut history = vec![IterationRecord { value: cur.f, grad_max_norm: pg }];
    let mut iterations = 0;
    let termination = loop {
        if pg < opts.grad_tolerance {
            break Termination::Converged;
        }
        if iterations >= opts.max_iterations {
            break Termination::MaxIterations;
        }

        // Variables pinned at a bound with an outward gradient stay fixed.
        let free: Vec<bool> = cur
            .x
            .iter()
            .zip(&cur.g)
            .map(|(&xi, &gi)| !((xi <= lo && gi > 0.0) || (xi >= hi && gi < 0.0)))
            .collect();
        let masked_grad: Vec<f64> =
            cur.g.iter().zip(&free).map(|(g, &fr)| if fr { *g } else { 0.0 }).collect();

        let mut d = two_loop(&masked_grad, &pairs);
        d.iter_mut().zip(&free).for_each(|(di, &fr)| {
            if !fr {
                *di = 0.0
            }
        });
        if dot(&d, &cur.g) >= 0.0 {
            pairs.clear();
            d = masked_grad.iter().map(|g| -g).collect();
        }

        let max_step = d
            .iter()
            .zip(&cur.x)
            .filter(|(di, _)| **di != 0.0)
            .map(|(di, xi)| if *di > 0.0 { (hi - xi) / di } else { (lo - xi) / di })
            .fold(f64::INFINITY, f64::min)
            .max(0.0);
        let initial = if pairs.is_empty() {
            (1.0 / dot(&d, &d).sqrt()).min(1.0)
        } else {
            1.0
        };
        let initial = initial.min(max_step);
        if !(initial > 0.0) {
            break Termination::LineSearchStalled;
        }

        let next = match line_search(&mut ev, &cur, &d, initial, max_step, opts) {
            Search::Accepted(p) => p,
            Search::Stalled => {
                // retry once along steepest descent before giving up
                if pairs.is_empty() {
                    break Termination::LineSearchStalled;
                }
                pairs.clear();
                continue;
            }
            Search::NonFinite => break Termination::NonFinite,
        };

        let s: Vec<f64> = next.x.iter().zip(&cur.x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = next.g.iter().zip(&cur.g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > f64::EPSILON * dot(&y, &y) {
            if pairs.len() == opts.memory {
                pairs.pop_front();
            }
            pairs.push_back((s, y, 1.0 / sy));
        }
        cur = next;
        iterations += 1;
        pg = projected_grad_norm(&cur.x, &cur.g, lo, hi);
        history.push(IterationRecord { value: cur.f, grad_max_norm: pg });
    };

    Minimum {
        value: cur.f,
        grad_max_norm: pg,
        x: cur.x,
        gradient: cur.g,
        iterations,
        termination,
        history,
        evaluations: ev.count,
        min_evaluated: ev.min_seen,
    }
}

/// `-H g` from the stored correction pairs.
fn two_loop(g: &[f64], pairs: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(pairs.len());
    for (s, y, rho) in pairs.iter().rev() {
        let a = rho * dot(s, &q);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
        alphas.push(a);
    }
    if let Some((s, y, _)) = pairs.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|qi| *qi *= gamma);
    }
    for ((s, y, rho), a) in pairs.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &q);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
    }
    q.iter_mut().for_each(|qi| *qi = -*qi);
    q
}

struct Trial {
    alpha: f64,
    point: Point,
    slope: f64,
}

fn line_search<F>(
    ev: &mut Evaluator<F>,
    cur: &Point,
    d: &[f64],
    initial: f64,
    max_step: f64,
    opts: &LbfgsbOptions,
) -> Search
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let f0 = cur.f;
    let slope0 = dot(&cur.g, d);
    let (lo_b, hi_b) = (opts.lower, opts.upper);
    let mut trial = |ev: &mut Evaluator<F>, alpha: f64| -> Option<Trial> {
        let x: Vec<f64> = cur
            .x
            .iter()
            .zip(d)
            .map(|(xi, di)| (xi + alpha * di).clamp(lo_b, hi_b))
            .collect();
        let point = ev.eval(x)?;
        let slope = dot(&point.g, d);
        Some(Trial { alpha, point, slope })
    };
    let armijo = |t: &Trial| t.point.f <= f0 + opts.c1 * t.alpha * slope0;
    let curvature = |t: &Trial| t.slope.abs() <= -opts.c2 * slope0;

    let mut prev = Trial {
        alpha: 0.0,
        point: Point { x: cur.x.clone(), f: cur.f, g: cur.g.clone() },
        slope: slope0,
    };
    let mut alpha = initial;
    let mut budget = opts.max_line_search;
    let (lo, hi) = loop {
        if budget == 0 {
            return accept_if_decreasing(prev, f0);
        }
        budget -= 1;
        let Some(t) = trial(ev, alpha) else {
            return Search::NonFinite;
        };
        if !armijo(&t) || (prev.alpha > 0.0 && t.point.f >= prev.point.f) {
            break (prev, t);
        }
        if curvature(&t) {
            return Search::Accepted(t.point);
        }
        if t.slope >= 0.0 {
            break (t, prev);
        }
        if t.alpha >= max_step {
            // at the box boundary with sufficient decrease
            return Search::Accepted(t.point);
        }
        alpha = (2.0 * t.alpha).min(max_step);
        prev = t;
    };
    zoom(ev, &mut trial, lo, hi, budget, f0, &armijo, &curvature)
}

#[allow(clippy::too_many_arguments)]
fn zoom<F, T>(
    ev: &mut Evaluator<F>,
    trial: &mut T,
    mut lo: Trial,
    mut hi: Trial,
    mut budget: usize,
    f0: f64,
    armijo: &dyn Fn(&Trial) -> bool,
    curvature: &dyn Fn(&Trial) -> bool,
) -> Search
where
    T: FnMut(&mut Evaluator<F>, f64) -> Option<Trial>,
{
    while budget > 0 {
        budget -= 1;
        let alpha = interpolate(&lo, &hi);
        if (alpha - lo.alpha).abs() < 1e-16 * alpha.abs().max(1.0) {
            break;
        }
        let Some(t) = trial(ev, alpha) else {
            return Search::NonFinite;
        };
        if !armijo(&t) || t.point.f >= lo.point.f {
            hi = t;
        } else {
            if curvature(&t) {
                return Search::Accepted(t.point);
            }
            if t.slope * (hi.alpha - lo.alpha) >= 0.0 {
                hi = lo;
            }
            lo = t;
        }
    }
    accept_if_decreasing(lo, f0)
}

fn accept_if_decreasing(t: Trial, f0: f64) -> Search {
    if t.alpha > 0.0 && t.point.f < f0 {
        Search::Accepted(t.point)
    } else {
        Search::Stalled
    }
}

/// Safeguarded cubic interpolation inside `[lo, hi]`, bisection as fallback.
fn interpolate(lo: &Trial, hi: &Trial) -> f64 {
    let (a, b) = (lo.alpha, hi.alpha);
    let (fa, fb, ga, gb) = (lo.point.f, hi.point.f, lo.slope, hi.slope);
    let d1 = ga + gb - 3.0 * (fa - fb) / (a - b);
    let disc = d1 * d1 - ga * gb;
    let mid = 0.5 * (a + b);
    if disc < 0.0 {
        return mid;
    }
    let d2 = (b - a).signum() * disc.sqrt();
    let c = b - (b - a) * (gb + d2 - d1) / (gb - ga + 2.0 * d2);
    let (left, right) = (a.min(b), a.max(b));
    let margin = 0.1 * (right - left);
    if c.is_finite() && c > left + margin && c < right - margin {
        c
    } else {
        mid
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> (f64, Vec<f64>) {
        let mut f = 0.0;
        let mut g = vec![0.0; x.len()];
        for i in 0..x.len() - 1 {
            let a = x[i + 1] - x[i] * x[i];
            let b = 1.0 - x[i];
            f += 100.0 * a * a + b * b;
            g[i] += -400.0 * x[i] * a - 2.0 * b;
            g[i + 1] += 200.0 * a;
        }
        (f, g)
    }

    #[test]
    fn rosenbrock_unbounded() {
        let opts = LbfgsbOptions { grad_tolerance: 1e-8, max_iterations: 5000, ..Default::default() };
        let m = minimize(rosenbrock, &[-1.2, 1.0, -0.5, 0.8], &opts);
        assert_eq!(m.termination, Termination::Converged);
        for xi in &m.x {
            assert!((xi - 1.0).abs() < 1e-6, "{:?}", m.x);
        }
        assert!(m.history.windows(2).all(|w| w[1].value <= w[0].value));
        assert_eq!(m.history.len(), m.iterations + 1);
    }

    #[test]
    fn active_bound() {
        // minimum of (x-3)^2 + (y+1)^2 inside [-2, 2]^2 is (2, -1)
        let f = |x: &[f64]| {
            let (a, b) = (x[0] - 3.0, x[1] + 1.0);
            (a * a + b * b, vec![2.0 * a, 2.0 * b])
        };
        let opts = LbfgsbOptions { lower: -2.0, upper: 2.0, grad_tolerance: 1e-9, ..Default::default() };
        let m = minimize(f, &[0.0, 0.0], &opts);
        assert_eq!(m.termination, Termination::Converged);
        assert!((m.x[0] - 2.0).abs() < 1e-12);
        assert!((m.x[1] + 1.0).abs() < 1e-7);
    }

    #[test]
    fn start_projected_into_box() {
        let f = |x: &[f64]| (x[0] * x[0], vec![2.0 * x[0]]);
        let opts = LbfgsbOptions { lower: 1.0, upper: 4.0, ..Default::default() };
        let m = minimize(f, &[10.0], &opts);
        assert_eq!(m.x, vec![1.0]);
        assert_eq!(m.termination, Termination::Converged);
    }

    #[test]
    fn stationary_start_needs_no_steps() {
        let f = |x: &[f64]| (x[0] * x[0] + x[1] * x[1], vec![2.0 * x[0], 2.0 * x[1]]);
        let m = minimize(f, &[0.0, 0.0], &LbfgsbOptions::default());
        assert_eq!(m.iterations, 0);
        assert_eq!(m.evaluations, 1);
    }

    #[test]
    fn non_finite_objective() {
        let f = |x: &[f64]| (if x[0] < 0.5 { f64::NAN } else { x[0] }, vec![1.0]);
        let m = minimize(f, &[1.0], &LbfgsbOptions::default());
        assert_eq!(m.termination, Termination::NonFinite);
    }

    #[test]
    fn max_iterations_respected() {
        let opts = LbfgsbOptions { grad_tolerance: 1e-12, max_iterations: 3, ..Default::default() };
        let m = minimize(rosenbrock, &[-1.2, 1.0], &opts);
        assert_eq!(m.termination, Termination::MaxIterations);
        assert_eq!(m.iterations, 3);
    }
}
