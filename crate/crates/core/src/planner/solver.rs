//! Augmented-Lagrangian (Powell–Hestenes–Rockafellar) solver with an
//! L-BFGS inner minimizer.
//!
//! Problems take the form `min f(x)` subject to `h(x) = 0` and `g(x) <= 0`.
//! Constraint Jacobians are sparse row lists.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

pub type SparseRow = Vec<(usize, f64)>;

#[derive(Clone, Debug, Default)]
pub struct Evaluation {
    pub objective: f64,
    pub objective_grad: Vec<f64>,
    pub eq: Vec<f64>,
    pub eq_jac: Vec<SparseRow>,
    pub ineq: Vec<f64>,
    pub ineq_jac: Vec<SparseRow>,
}

impl Evaluation {
    /// Largest equality residual or positive inequality value.
    pub fn max_violation(&self) -> f64 {
        let e = self.eq.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        self.ineq.iter().fold(e, |m, v| m.max(*v))
    }
}

pub trait Problem {
    fn dim(&self) -> usize;
    /// Objective and constraints at `x`; gradients only when `with_derivatives`.
    fn evaluate(&self, x: &[f64], with_derivatives: bool) -> Evaluation;
    /// Dense row-major Hessian of the objective. When present the inner
    /// solver takes Gauss-Newton steps instead of L-BFGS steps.
    fn objective_hessian(&self, _x: &[f64]) -> Option<Vec<f64>> {
        None
    }
}

#[derive(Clone, Debug)]
pub struct AlOptions {
    pub max_outer: usize,
    pub max_inner: usize,
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    pub initial_penalty: f64,
    pub penalty_growth: f64,
    pub max_penalty: f64,
    pub memory: usize,
}

impl Default for AlOptions {
    fn default() -> Self {
        Self {
            max_outer: 60,
            max_inner: 3000,
            feasibility_tol: 1e-9,
            optimality_tol: 1e-7,
            initial_penalty: 10.0,
            penalty_growth: 10.0,
            max_penalty: 1e8,
            memory: 12,
        }
    }
}

/// Multipliers and penalty carried between solves.
#[derive(Clone, Debug, Default)]
pub struct Multipliers {
    pub eq: Vec<f64>,
    pub ineq: Vec<f64>,
    pub penalty: f64,
}

#[derive(Clone, Debug)]
pub struct AlReport {
    pub x: Vec<f64>,
    pub objective: f64,
    pub max_violation: f64,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    pub converged: bool,
    pub multipliers: Multipliers,
}

fn merit<P: Problem>(p: &P, x: &[f64], m: &Multipliers, grad: Option<&mut [f64]>) -> f64 {
    let ev = p.evaluate(x, grad.is_some());
    merit_of(&ev, m, grad)
}

fn merit_of(ev: &Evaluation, m: &Multipliers, grad: Option<&mut [f64]>) -> f64 {
    let c = m.penalty;
    let mut val = ev.objective;
    for (h, l) in ev.eq.iter().zip(&m.eq) {
        val += l * h + 0.5 * c * h * h;
    }
    for (g, mu) in ev.ineq.iter().zip(&m.ineq) {
        let s = (mu + c * g).max(0.0);
        val += (s * s - mu * mu) / (2.0 * c);
    }
    if let Some(grad) = grad {
        grad.copy_from_slice(&ev.objective_grad);
        for ((h, l), row) in ev.eq.iter().zip(&m.eq).zip(&ev.eq_jac) {
            let w = l + c * h;
            for &(i, d) in row {
                grad[i] += w * d;
            }
        }
        for ((g, mu), row) in ev.ineq.iter().zip(&m.ineq).zip(&ev.ineq_jac) {
            let w = (mu + c * g).max(0.0);
            if w > 0.0 {
                for &(i, d) in row {
                    grad[i] += w * d;
                }
            }
        }
    }
    val
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

pub struct InnerResult {
    pub iterations: usize,
    pub grad_norm: f64,
}

/// L-BFGS with Armijo backtracking. Minimizes `f` in place.
pub fn lbfgs<F>(mut f: F, x: &mut [f64], max_iter: usize, gtol: f64, memory: usize) -> InnerResult
where
    F: FnMut(&[f64], Option<&mut [f64]>) -> f64,
{
    let n = x.len();
    let mut g = vec![0.0; n];
    let mut fx = f(x, Some(&mut g));
    let mut hist: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(memory);
    let mut dir = vec![0.0; n];
    let mut x_new = vec![0.0; n];
    let mut g_new = vec![0.0; n];
    let mut stalls = 0;
    let mut iter = 0;
    while iter < max_iter {
        let gn = inf_norm(&g);
        if gn <= gtol {
            break;
        }
        // two-loop recursion
        dir.copy_from_slice(&g);
        let mut alphas = Vec::with_capacity(hist.len());
        for (s, y, rho) in hist.iter().rev() {
            let a = rho * dot(s, &dir);
            for i in 0..n {
                dir[i] -= a * y[i];
            }
            alphas.push(a);
        }
        let gamma = hist.back().map(|(s, y, _)| dot(s, y) / dot(y, y)).unwrap_or(1.0 / gn.max(1.0));
        for d in dir.iter_mut() {
            *d *= gamma;
        }
        for ((s, y, rho), a) in hist.iter().zip(alphas.into_iter().rev()) {
            let b = rho * dot(y, &dir);
            for i in 0..n {
                dir[i] += s[i] * (a - b);
            }
        }
        for d in dir.iter_mut() {
            *d = -*d;
        }
        let mut slope = dot(&g, &dir);
        if !(slope < 0.0) {
            // not a descent direction: restart from steepest descent
            hist.clear();
            for i in 0..n {
                dir[i] = -g[i] / gn.max(1.0);
            }
            slope = dot(&g, &dir);
        }
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            for i in 0..n {
                x_new[i] = x[i] + step * dir[i];
            }
            let f_new = f(&x_new, Some(&mut g_new));
            if f_new.is_finite() && f_new <= fx + 1e-4 * step * slope {
                let s: Vec<f64> = (0..n).map(|i| x_new[i] - x[i]).collect();
                let y: Vec<f64> = (0..n).map(|i| g_new[i] - g[i]).collect();
                let sy = dot(&s, &y);
                if sy > 1e-16 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && sy > 0.0 {
                    if hist.len() == memory {
                        hist.pop_front();
                    }
                    hist.push_back((s, y, 1.0 / sy));
                }
                let decrease = fx - f_new;
                x.copy_from_slice(&x_new);
                g.copy_from_slice(&g_new);
                fx = f_new;
                accepted = true;
                if decrease <= 1e-16 * (1.0 + fx.abs()) {
                    stalls += 1;
                } else {
                    stalls = 0;
                }
                break;
            }
            step *= 0.5;
        }
        iter += 1;
        if !accepted {
            if hist.is_empty() {
                break;
            }
            hist.clear();
            continue;
        }
        if stalls >= 5 {
            break;
        }
    }
    InnerResult {
        iterations: iter,
        grad_norm: inf_norm(&g),
    }
}

/// Damped Gauss-Newton on the augmented Lagrangian: the objective Hessian
/// plus `c ∇h ∇hᵀ` over equalities and active inequalities.
fn newton<P: Problem>(p: &P, x: &mut [f64], m: &Multipliers, max_iter: usize, gtol: f64) -> InnerResult {
    let n = x.len();
    let c = m.penalty;
    let mut g = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut iter = 0;
    let mut stalls = 0;
    loop {
        let ev = p.evaluate(x, true);
        let fx = merit_of(&ev, m, Some(&mut g));
        let gn = inf_norm(&g);
        if gn <= gtol || iter >= max_iter || stalls >= 3 {
            return InnerResult {
                iterations: iter,
                grad_norm: gn,
            };
        }
        iter += 1;
        let mut h = match p.objective_hessian(x) {
            Some(v) => DMatrix::from_row_slice(n, n, &v),
            None => DMatrix::identity(n, n),
        };
        let mut add_outer = |row: &SparseRow, w: f64| {
            for &(i, a) in row {
                for &(j, b) in row {
                    h[(i, j)] += w * a * b;
                }
            }
        };
        for row in &ev.eq_jac {
            add_outer(row, c);
        }
        for ((gv, mu), row) in ev.ineq.iter().zip(&m.ineq).zip(&ev.ineq_jac) {
            if mu + c * gv > 0.0 {
                add_outer(row, c);
            }
        }
        let scale = (0..n).map(|i| h[(i, i)].abs()).fold(0.0, f64::max).max(1.0);
        let mut ridge = 1e-12 * scale;
        let dir = loop {
            let mut hr = h.clone();
            for i in 0..n {
                hr[(i, i)] += ridge;
            }
            if let Some(ch) = hr.cholesky() {
                break ch.solve(&DVector::from_column_slice(&g));
            }
            ridge *= 100.0;
        };
        let slope: f64 = -dir.dot(&DVector::from_column_slice(&g));
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..50 {
            for i in 0..n {
                trial[i] = x[i] - step * dir[i];
            }
            let ft = merit(p, &trial, m, None);
            if ft.is_finite() && ft <= fx + 1e-4 * step * slope {
                if fx - ft <= 1e-15 * (1.0 + fx.abs()) {
                    stalls += 1;
                } else {
                    stalls = 0;
                }
                x.copy_from_slice(&trial);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            stalls = usize::MAX / 2;
        }
    }
}

/// Solves `problem` from `x0`, optionally warm-starting the multipliers.
pub fn solve<P: Problem>(problem: &P, x0: &[f64], warm: Option<Multipliers>, opts: &AlOptions) -> AlReport {
    let mut x = x0.to_vec();
    let probe = problem.evaluate(&x, false);
    let mut m = warm.unwrap_or_default();
    // warm multipliers carry the information; a large inherited penalty only
    // hurts conditioning
    m.penalty = if m.penalty > 0.0 {
        m.penalty.min(opts.initial_penalty * 100.0)
    } else {
        opts.initial_penalty
    };
    let use_newton = problem.objective_hessian(x0).is_some();
    m.eq.resize(probe.eq.len(), 0.0);
    m.ineq.resize(probe.ineq.len(), 0.0);

    let mut prev_viol = f64::INFINITY;
    let mut inner_total = 0;
    let mut converged = false;
    let mut outer = 0;
    let mut last = probe;
    while outer < opts.max_outer {
        outer += 1;
        let gtol = opts.optimality_tol.max(prev_viol.min(1e-2)) * (1.0 + last.objective.abs());
        let snapshot = m.clone();
        let res = if use_newton {
            newton(problem, &mut x, &snapshot, opts.max_inner, gtol)
        } else {
            lbfgs(|xx, g| merit(problem, xx, &snapshot, g), &mut x, opts.max_inner, gtol, opts.memory)
        };
        let f_prev = last.objective;
        inner_total += res.iterations;
        last = problem.evaluate(&x, false);
        let c = m.penalty;
        for (l, h) in m.eq.iter_mut().zip(&last.eq) {
            *l += c * h;
        }
        for (mu, g) in m.ineq.iter_mut().zip(&last.ineq) {
            *mu = (*mu + c * g).max(0.0);
        }
        let viol = last.max_violation();
        let stationary = res.grad_norm <= opts.optimality_tol * (1.0 + last.objective.abs());
        let settled = prev_viol <= opts.feasibility_tol
            && (last.objective - f_prev).abs() <= 1e-11 * (1.0 + last.objective.abs());
        if viol <= opts.feasibility_tol && (stationary || settled) {
            converged = true;
            break;
        }
        if viol > opts.feasibility_tol && viol > 0.25 * prev_viol {
            m.penalty = (m.penalty * opts.penalty_growth).min(opts.max_penalty);
        }
        prev_viol = viol;
    }
    AlReport {
        objective: last.objective,
        max_violation: last.max_violation(),
        x,
        outer_iterations: outer,
        inner_iterations: inner_total,
        converged,
        multipliers: m,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// min (x-2)² + (y-1)²  s.t.  x + y = 2,  x <= 0.5
    struct Toy;

    impl Problem for Toy {
        fn dim(&self) -> usize {
            2
        }
        fn evaluate(&self, x: &[f64], d: bool) -> Evaluation {
            let mut ev = Evaluation {
                objective: (x[0] - 2.0).powi(2) + (x[1] - 1.0).powi(2),
                eq: vec![x[0] + x[1] - 2.0],
                ineq: vec![x[0] - 0.5],
                ..Default::default()
            };
            if d {
                ev.objective_grad = vec![2.0 * (x[0] - 2.0), 2.0 * (x[1] - 1.0)];
                ev.eq_jac = vec![vec![(0, 1.0), (1, 1.0)]];
                ev.ineq_jac = vec![vec![(0, 1.0)]];
            }
            ev
        }
    }

    #[test]
    fn lbfgs_rosenbrock() {
        let mut x = vec![-1.2, 1.0];
        let r = lbfgs(
            |x, g| {
                let f = (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
                if let Some(g) = g {
                    g[0] = -2.0 * (1.0 - x[0]) - 400.0 * x[0] * (x[1] - x[0] * x[0]);
                    g[1] = 200.0 * (x[1] - x[0] * x[0]);
                }
                f
            },
            &mut x,
            1000,
            1e-10,
            8,
        );
        assert!(r.grad_norm <= 1e-8);
        assert!((x[0] - 1.0).abs() < 1e-6 && (x[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn al_active_inequality() {
        let r = solve(&Toy, &[0.0, 0.0], None, &AlOptions::default());
        assert!(r.converged);
        assert!((r.x[0] - 0.5).abs() < 1e-7, "{:?}", r.x);
        assert!((r.x[1] - 1.5).abs() < 1e-7);
        assert!(r.max_violation <= 1e-9);
        // stationarity: (-3, 1) + lambda (1, 1) + mu (1, 0) = 0
        assert!((r.multipliers.eq[0] + 1.0).abs() < 1e-5);
        assert!((r.multipliers.ineq[0] - 4.0).abs() < 1e-5);
    }
}
