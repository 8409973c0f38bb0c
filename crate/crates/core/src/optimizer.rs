//! Smooth convex minimization: L-BFGS, damped Newton and a diagonal
//! quasi-Newton method, all globalized by a strong-Wolfe line search.
//!
//! An optional symmetric box `|x_i| <= bound` is supported. Coordinates at
//! the box whose gradient points outward are held fixed, and convergence is
//! measured on the projected gradient.

use std::collections::VecDeque;
use std::time::Instant;

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{axpy, dot, norm};

#[derive(Debug, Error)]
pub enum OptError {
    #[error("objective returned a non-finite value at the starting point")]
    NonFinite,
    #[error("invalid optimizer options: {0}")]
    InvalidOptions(String),
    #[error("the Newton method needs a Hessian but the objective does not provide one")]
    MissingHessian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Lbfgs,
    Newton,
    DiagQn,
}

impl std::str::FromStr for Method {
    type Err = OptError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lbfgs" | "l-bfgs" => Ok(Method::Lbfgs),
            "newton" => Ok(Method::Newton),
            "diag" | "diag_qn" | "diagqn" => Ok(Method::DiagQn),
            other => Err(OptError::InvalidOptions(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizerOpts {
    pub method: Method,
    pub grad_tol: f64,
    pub max_iters: usize,
    pub lbfgs_memory: usize,
    pub wolfe_c1: f64,
    pub wolfe_c2: f64,
    /// Symmetric box on every coordinate.
    pub bound: Option<f64>,
    /// Largest change of any single coordinate in one iteration.
    #[serde(default)]
    pub max_step: Option<f64>,
}

impl Default for OptimizerOpts {
    fn default() -> Self {
        OptimizerOpts {
            method: Method::Lbfgs,
            grad_tol: 1e-3,
            max_iters: 2000,
            lbfgs_memory: 10,
            wolfe_c1: 1e-4,
            wolfe_c2: 0.9,
            bound: None,
            max_step: None,
        }
    }
}

impl OptimizerOpts {
    pub fn validate(&self) -> Result<(), OptError> {
        if !(0.0 < self.wolfe_c1 && self.wolfe_c1 < self.wolfe_c2 && self.wolfe_c2 < 1.0) {
            return Err(OptError::InvalidOptions("need 0 < c1 < c2 < 1".into()));
        }
        if !(self.grad_tol > 0.0) {
            return Err(OptError::InvalidOptions("grad_tol must be positive".into()));
        }
        if self.lbfgs_memory == 0 {
            return Err(OptError::InvalidOptions("lbfgs_memory must be positive".into()));
        }
        if let Some(b) = self.bound {
            if !(b > 0.0) {
                return Err(OptError::InvalidOptions("bound must be positive".into()));
            }
        }
        if let Some(s) = self.max_step {
            if !(s > 0.0) {
                return Err(OptError::InvalidOptions("max_step must be positive".into()));
            }
        }
        Ok(())
    }
}

/// A smooth function to minimize.
pub trait Objective {
    /// Writes the gradient into `grad` and returns the value.
    fn value_grad(&mut self, x: &[f64], grad: &mut [f64]) -> f64;

    /// Dense Hessian, required by [`Method::Newton`].
    fn hessian(&mut self, _x: &[f64]) -> Option<DMatrix<f64>> {
        None
    }

    /// Positive Hessian diagonal; L-BFGS uses it as its initial inverse
    /// Hessian scaling when available.
    fn hessian_diag(&mut self, _x: &[f64]) -> Option<Vec<f64>> {
        None
    }
}

/// Adapter for closures returning `(value, gradient)`.
pub struct FnObjective<F>(pub F);

impl<F: FnMut(&[f64]) -> (f64, Vec<f64>)> Objective for FnObjective<F> {
    fn value_grad(&mut self, x: &[f64], grad: &mut [f64]) -> f64 {
        let (v, g) = (self.0)(x);
        grad.copy_from_slice(&g);
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: usize,
    pub value: f64,
    pub grad_norm: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptResult {
    pub x: Vec<f64>,
    pub value: f64,
    /// Norm of the projected gradient at `x`.
    pub grad_norm: f64,
    pub iters: usize,
    pub converged: bool,
    /// Coordinates sitting on the box at exit.
    pub at_bound: usize,
    pub message: Option<String>,
    pub trace: Vec<TraceRow>,
}

impl OptResult {
    /// Trace as CSV with header `iter,value,grad_norm,seconds`.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("iter,value,grad_norm,seconds\n");
        for r in &self.trace {
            out.push_str(&format!("{},{:.12e},{:.6e},{:.6}\n", r.iter, r.value, r.grad_norm, r.seconds));
        }
        out
    }
}

struct Box_ {
    bound: Option<f64>,
}

impl Box_ {
    fn clamp(&self, x: &mut [f64]) {
        if let Some(b) = self.bound {
            x.iter_mut().for_each(|v| *v = v.clamp(-b, b));
        }
    }

    /// Coordinates pinned at the box with the gradient pushing outward.
    fn active(&self, x: &[f64], g: &[f64]) -> Vec<bool> {
        match self.bound {
            None => vec![false; x.len()],
            Some(b) => x
                .iter()
                .zip(g)
                .map(|(&xi, &gi)| (xi >= b && gi < 0.0) || (xi <= -b && gi > 0.0))
                .collect(),
        }
    }

    /// Drops the components of `d` that leave the box from coordinates
    /// already on it.
    fn trim(&self, x: &[f64], d: &mut [f64]) {
        if let Some(b) = self.bound {
            for (&xi, di) in x.iter().zip(d.iter_mut()) {
                if (xi >= b && *di > 0.0) || (xi <= -b && *di < 0.0) {
                    *di = 0.0;
                }
            }
        }
    }

    /// Largest step along `d` that stays inside the box.
    fn max_step(&self, x: &[f64], d: &[f64]) -> f64 {
        let Some(b) = self.bound else { return f64::INFINITY };
        let mut amax = f64::INFINITY;
        for (&xi, &di) in x.iter().zip(d) {
            if di > 0.0 {
                amax = amax.min((b - xi) / di);
            } else if di < 0.0 {
                amax = amax.min((-b - xi) / di);
            }
        }
        amax.max(0.0)
    }
}

fn step_limit(bx: &Box_, max_step: Option<f64>, x: &[f64], d: &[f64]) -> f64 {
    let widest = d.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    match max_step {
        Some(s) if widest > 0.0 => bx.max_step(x, d).min(s / widest),
        _ => bx.max_step(x, d),
    }
}

fn projected(g: &[f64], active: &[bool]) -> Vec<f64> {
    g.iter().zip(active).map(|(&gi, &a)| if a { 0.0 } else { gi }).collect()
}

struct Evaluator<'a, O: Objective> {
    obj: &'a mut O,
    evals: usize,
}

impl<O: Objective> Evaluator<'_, O> {
    fn eval(&mut self, x: &[f64]) -> (f64, Vec<f64>) {
        self.evals += 1;
        let mut g = vec![0.0; x.len()];
        let f = self.obj.value_grad(x, &mut g);
        (f, g)
    }
}

const MAX_LINE_SEARCH_EVALS: usize = 50;
const ROUNDING_FLOOR: f64 = 1e-12;

struct LineSearchPoint {
    alpha: f64,
    x: Vec<f64>,
    f: f64,
    g: Vec<f64>,
}

/// Cubic interpolation minimizer of the Hermite cubic through
/// `(a, fa, da)` and `(b, fb, db)`, safeguarded to the middle of `[a, b]`.
fn cubic_step(a: f64, fa: f64, da: f64, b: f64, fb: f64, db: f64) -> f64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let width = hi - lo;
    let d1 = da + db - 3.0 * (fa - fb) / (a - b);
    let disc = d1 * d1 - da * db;
    let mut t = if disc >= 0.0 {
        let d2 = (b - a).signum() * disc.sqrt();
        b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2)
    } else {
        f64::NAN
    };
    if !t.is_finite() {
        t = 0.5 * (lo + hi);
    }
    t.clamp(lo + 0.1 * width, hi - 0.1 * width)
}

#[allow(clippy::too_many_arguments)]
fn strong_wolfe<O: Objective>(
    ev: &mut Evaluator<'_, O>,
    bx: &Box_,
    x0: &[f64],
    f0: f64,
    g0: &[f64],
    d: &[f64],
    alpha_init: f64,
    alpha_max: f64,
    c1: f64,
    c2: f64,
) -> Result<LineSearchPoint, String> {
    let dphi0 = dot(g0, d);
    // Near the optimum of a large sum, true decreases fall below the rounding
    // error of f; the curvature condition then decides alone.
    let noise = ROUNDING_FLOOR * f0.abs();
    let approx_wolfe = |f: f64, dphi: f64| f <= f0 + noise && dphi.abs() <= -c2 * dphi0;
    let point = |alpha: f64| {
        let mut x = x0.to_vec();
        axpy(alpha, d, &mut x);
        bx.clamp(&mut x);
        x
    };
    let mut evals = 0;
    let mut prev = (0.0, f0, dphi0);
    let mut alpha = alpha_init.min(alpha_max);
    let mut bracket: Option<((f64, f64, f64), (f64, f64, f64))> = None;
    // bracketing phase
    while bracket.is_none() {
        if evals >= MAX_LINE_SEARCH_EVALS {
            return Err("line search exceeded its evaluation budget while bracketing".into());
        }
        let x = point(alpha);
        let (f, g) = ev.eval(&x);
        evals += 1;
        if !f.is_finite() {
            alpha = 0.5 * (prev.0 + alpha);
            continue;
        }
        let dphi = dot(&g, d);
        if approx_wolfe(f, dphi) {
            return Ok(LineSearchPoint { alpha, x, f, g });
        }
        if f > f0 + c1 * alpha * dphi0 || (evals > 1 && f >= prev.1) {
            bracket = Some((prev, (alpha, f, dphi)));
            continue;
        }
        if dphi.abs() <= -c2 * dphi0 {
            return Ok(LineSearchPoint { alpha, x, f, g });
        }
        if dphi >= 0.0 {
            bracket = Some(((alpha, f, dphi), prev));
            continue;
        }
        if alpha >= alpha_max {
            // reached the box while still descending
            return Ok(LineSearchPoint { alpha, x, f, g });
        }
        prev = (alpha, f, dphi);
        alpha = (4.0 * alpha).min(alpha_max);
    }
    let (mut lo, mut hi) = bracket.expect("bracket found");
    // zoom phase
    while evals < MAX_LINE_SEARCH_EVALS {
        let alpha = cubic_step(lo.0, lo.1, lo.2, hi.0, hi.1, hi.2);
        if (hi.0 - lo.0).abs() <= 1e-16 * lo.0.abs().max(1e-16) {
            break;
        }
        let x = point(alpha);
        let (f, g) = ev.eval(&x);
        evals += 1;
        let dphi = dot(&g, d);
        if f.is_finite() && approx_wolfe(f, dphi) {
            return Ok(LineSearchPoint { alpha, x, f, g });
        }
        if !f.is_finite() || f > f0 + c1 * alpha * dphi0 || f >= lo.1 {
            hi = (alpha, f, dphi);
        } else {
            if dphi.abs() <= -c2 * dphi0 {
                return Ok(LineSearchPoint { alpha, x, f, g });
            }
            if dphi * (hi.0 - lo.0) >= 0.0 {
                hi = lo;
            }
            lo = (alpha, f, dphi);
        }
    }
    // accept the best sufficient-decrease point if it makes progress
    if lo.0 > 0.0 && lo.1 < f0 {
        let x = point(lo.0);
        let (f, g) = ev.eval(&x);
        return Ok(LineSearchPoint { alpha: lo.0, x, f, g });
    }
    Err(format!("line search failed after {evals} evaluations"))
}

enum Memory {
    Lbfgs { pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)>, cap: usize },
    Diag { d: Option<Vec<f64>> },
    Newton,
}

impl Memory {
    fn reset(&mut self) {
        match self {
            Memory::Lbfgs { pairs, .. } => pairs.clear(),
            Memory::Diag { d } => *d = None,
            Memory::Newton => {}
        }
    }

    /// `true` until some curvature information has been collected.
    fn is_cold(&self) -> bool {
        match self {
            Memory::Lbfgs { pairs, .. } => pairs.is_empty(),
            Memory::Diag { d } => d.is_none(),
            Memory::Newton => false,
        }
    }

    fn update(&mut self, s: &[f64], y: &[f64]) {
        let sy = dot(s, y);
        if !(sy > 1e-12 * norm(s) * norm(y)) {
            return;
        }
        match self {
            Memory::Lbfgs { pairs, cap } => {
                if pairs.len() == *cap {
                    pairs.pop_front();
                }
                pairs.push_back((s.to_vec(), y.to_vec(), 1.0 / sy));
            }
            Memory::Diag { d } => {
                let yy = dot(y, y);
                let cur = d.take().unwrap_or_else(|| vec![yy / sy; s.len()]);
                let sds: f64 = s.iter().zip(&cur).map(|(si, di)| di * si * si).sum();
                let mut next: Vec<f64> = cur
                    .iter()
                    .zip(s.iter().zip(y))
                    .map(|(&di, (&si, &yi))| di + yi * yi / sy - (di * si) * (di * si) / sds)
                    .collect();
                let scale = yy / sy;
                for v in next.iter_mut() {
                    if !v.is_finite() || *v < 1e-8 * scale {
                        *v = 1e-8 * scale;
                    }
                }
                *d = Some(next);
            }
            Memory::Newton => {}
        }
    }

    /// Approximates `-H⁻¹ g` restricted to the free coordinates. The flag
    /// tells whether the direction carries curvature scaling, so that a unit
    /// step is a sensible first trial.
    fn direction<O: Objective>(
        &self,
        obj: &mut O,
        x: &[f64],
        pg: &[f64],
        active: &[bool],
    ) -> Result<(Vec<f64>, bool), OptError> {
        let mut scaled = !self.is_cold();
        let mut d = match self {
            Memory::Lbfgs { pairs, .. } => {
                let diag = obj
                    .hessian_diag(x)
                    .filter(|h| h.len() == x.len() && h.iter().zip(active).all(|(&v, &a)| a || (v > 0.0 && v.is_finite())));
                scaled |= diag.is_some();
                let mut q = pg.to_vec();
                let mut alphas = Vec::with_capacity(pairs.len());
                for (s, y, rho) in pairs.iter().rev() {
                    let a = rho * dot(s, &q);
                    axpy(-a, y, &mut q);
                    alphas.push(a);
                }
                if let Some(h) = &diag {
                    q.iter_mut().zip(h.iter().zip(active)).for_each(|(v, (&hv, &a))| {
                        if !a {
                            *v /= hv;
                        }
                    });
                } else if let Some((s, y, _)) = pairs.back() {
                    let gamma = dot(s, y) / dot(y, y);
                    q.iter_mut().for_each(|v| *v *= gamma);
                }
                for ((s, y, rho), a) in pairs.iter().zip(alphas.iter().rev()) {
                    let b = rho * dot(y, &q);
                    axpy(a - b, s, &mut q);
                }
                q.iter_mut().for_each(|v| *v = -*v);
                q
            }
            Memory::Diag { d } => match d {
                Some(diag) => pg.iter().zip(diag).map(|(g, h)| -g / h).collect(),
                None => pg.iter().map(|g| -g).collect(),
            },
            Memory::Newton => {
                let mut h = obj.hessian(x).ok_or(OptError::MissingHessian)?;
                let p = pg.len();
                for i in 0..p {
                    if active[i] {
                        for j in 0..p {
                            h[(i, j)] = 0.0;
                            h[(j, i)] = 0.0;
                        }
                        h[(i, i)] = 1.0;
                    }
                }
                let rhs = DVector::from_iterator(p, pg.iter().map(|g| -g));
                let mut tau = 1e-10;
                loop {
                    let mut damped = h.clone();
                    for i in 0..p {
                        damped[(i, i)] += tau;
                    }
                    if let Some(ch) = Cholesky::new(damped) {
                        break ch.solve(&rhs).iter().copied().collect();
                    }
                    tau *= 10.0;
                    if tau > 1e10 {
                        break pg.iter().map(|g| -g).collect();
                    }
                }
            }
        };
        for (di, &a) in d.iter_mut().zip(active) {
            if a {
                *di = 0.0;
            }
        }
        Ok((d, scaled))
    }
}

/// Minimizes `obj` from `x0`.
pub fn minimize<O: Objective>(obj: &mut O, x0: &[f64], opts: &OptimizerOpts) -> Result<OptResult, OptError> {
    opts.validate()?;
    let start = Instant::now();
    let bx = Box_ { bound: opts.bound };
    let mut x = x0.to_vec();
    bx.clamp(&mut x);
    let mut memory = match opts.method {
        Method::Lbfgs => Memory::Lbfgs { pairs: VecDeque::new(), cap: opts.lbfgs_memory },
        Method::DiagQn => Memory::Diag { d: None },
        Method::Newton => Memory::Newton,
    };
    if let Memory::Diag { d } = &mut memory {
        // exact curvature, when available, is a better start than a scalar guess
        *d = obj.hessian_diag(&x).filter(|h| h.len() == x.len()).map(|mut h| {
            let top = h.iter().fold(0.0f64, |a, &v| if v.is_finite() { a.max(v) } else { a });
            let floor = 1e-8 * top.max(1e-300);
            h.iter_mut().for_each(|v| if !v.is_finite() || *v < floor { *v = floor });
            h
        });
    }
    let mut ev = Evaluator { obj, evals: 0 };
    let (mut f, mut g) = ev.eval(&x);
    if !f.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return Err(OptError::NonFinite);
    }
    let mut active = bx.active(&x, &g);
    let mut pg = projected(&g, &active);
    let mut gnorm = norm(&pg);
    let mut trace = vec![TraceRow { iter: 0, value: f, grad_norm: gnorm, seconds: 0.0 }];
    let mut message = None;
    let mut iters = 0;
    while gnorm >= opts.grad_tol && iters < opts.max_iters {
        let (mut d, mut scaled) = memory.direction(ev.obj, &x, &pg, &active)?;
        bx.trim(&x, &mut d);
        if !(dot(&d, &pg) < -1e-14 * norm(&d) * gnorm) {
            memory.reset();
            d = pg.iter().map(|v| -v).collect();
            scaled = false;
        }
        let alpha_init = if !scaled {
            let l1: f64 = pg.iter().map(|v| v.abs()).sum();
            (1.0 / l1).min(1.0)
        } else {
            1.0
        };
        let alpha_max = step_limit(&bx, opts.max_step, &x, &d);
        if alpha_max <= 0.0 {
            message = Some("no feasible descent direction inside the box".into());
            break;
        }
        let step = match strong_wolfe(&mut ev, &bx, &x, f, &g, &d, alpha_init, alpha_max, opts.wolfe_c1, opts.wolfe_c2) {
            Ok(p) => p,
            Err(msg) => {
                if memory.is_cold() {
                    message = Some(msg);
                    break;
                }
                // retry once along steepest descent
                memory.reset();
                d = pg.iter().map(|v| -v).collect();
                let alpha_max = step_limit(&bx, opts.max_step, &x, &d);
                let l1: f64 = pg.iter().map(|v| v.abs()).sum();
                match strong_wolfe(&mut ev, &bx, &x, f, &g, &d, (1.0 / l1).min(1.0), alpha_max, opts.wolfe_c1, opts.wolfe_c2) {
                    Ok(p) => p,
                    Err(msg) => {
                        message = Some(msg);
                        break;
                    }
                }
            }
        };
        if !(step.f <= f + ROUNDING_FLOOR * f.abs()) {
            message = Some("line search returned a non-decreasing step".into());
            break;
        }
        let s: Vec<f64> = step.x.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = step.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        memory.update(&s, &y);
        x = step.x;
        f = step.f;
        g = step.g;
        let _ = step.alpha;
        active = bx.active(&x, &g);
        pg = projected(&g, &active);
        gnorm = norm(&pg);
        iters += 1;
        trace.push(TraceRow { iter: iters, value: f, grad_norm: gnorm, seconds: start.elapsed().as_secs_f64() });
    }
    let converged = gnorm < opts.grad_tol;
    if !converged && message.is_none() {
        message = Some(format!("iteration cap of {} reached", opts.max_iters));
    }
    let at_bound = match opts.bound {
        Some(b) => x.iter().filter(|v| v.abs() >= b).count(),
        None => 0,
    };
    Ok(OptResult { x, value: f, grad_norm: gnorm, iters, converged, at_bound, message, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Quadratic {
        a: Vec<f64>,
        scale: Vec<f64>,
    }

    impl Objective for Quadratic {
        fn value_grad(&mut self, x: &[f64], grad: &mut [f64]) -> f64 {
            let mut v = 0.0;
            for i in 0..x.len() {
                let r = x[i] - self.a[i];
                v += 0.5 * self.scale[i] * r * r;
                grad[i] = self.scale[i] * r;
            }
            v
        }

        fn hessian(&mut self, _x: &[f64]) -> Option<DMatrix<f64>> {
            Some(DMatrix::from_diagonal(&DVector::from_vec(self.scale.clone())))
        }
    }

    #[test]
    fn quadratic_in_few_iterations() {
        let a = vec![1.0, -2.0, 3.0, 0.5];
        let mut q = Quadratic { a: a.clone(), scale: vec![1.0; 4] };
        let opts = OptimizerOpts { grad_tol: 1e-10, ..Default::default() };
        let r = minimize(&mut q, &[0.0; 4], &opts).unwrap();
        assert!(r.converged && r.grad_norm < 1e-10);
        assert!(r.iters <= a.len() + 1, "{} iterations", r.iters);
        for (x, y) in r.x.iter().zip(&a) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn logistic_dual_1d() {
        for method in [Method::Lbfgs, Method::Newton, Method::DiagQn] {
            let mut obj = Logistic1d;
            let opts = OptimizerOpts { method, grad_tol: 1e-10, ..Default::default() };
            let r = minimize(&mut obj, &[0.0], &opts).unwrap();
            assert!((r.x[0] - (1.0f64 / 3.0).ln()).abs() < 1e-8, "{method:?}: {}", r.x[0]);
            for w in r.trace.windows(2) {
                assert!(w[1].value <= w[0].value);
            }
        }
    }

    struct Logistic1d;

    impl Objective for Logistic1d {
        fn value_grad(&mut self, x: &[f64], grad: &mut [f64]) -> f64 {
            let s = 1.0 / (1.0 + (-x[0]).exp());
            grad[0] = s - 0.25;
            (1.0 + x[0].exp()).ln() - 0.25 * x[0]
        }

        fn hessian(&mut self, x: &[f64]) -> Option<DMatrix<f64>> {
            let s = 1.0 / (1.0 + (-x[0]).exp());
            Some(DMatrix::from_element(1, 1, s * (1.0 - s)))
        }
    }

    #[test]
    fn methods_agree_on_ill_conditioned_quadratic() {
        let a = vec![3.0, -1.0, 0.25, 7.0, -4.0];
        let scale = vec![100.0, 1.0, 0.1, 10.0, 3.0];
        let mut results = Vec::new();
        for method in [Method::Lbfgs, Method::Newton, Method::DiagQn] {
            let mut q = Quadratic { a: a.clone(), scale: scale.clone() };
            let opts = OptimizerOpts { method, grad_tol: 1e-9, ..Default::default() };
            results.push(minimize(&mut q, &[0.0; 5], &opts).unwrap());
        }
        for r in &results {
            assert!(r.converged);
            for (x, y) in r.x.iter().zip(&a) {
                assert!((x - y).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn bound_is_respected_and_projected_gradient_vanishes() {
        // minimum at 100, outside the box
        let mut q = Quadratic { a: vec![100.0, 1.0], scale: vec![1.0, 1.0] };
        let opts = OptimizerOpts { bound: Some(40.0), grad_tol: 1e-9, ..Default::default() };
        let r = minimize(&mut q, &[0.0, 0.0], &opts).unwrap();
        assert!(r.converged);
        assert_eq!(r.x[0], 40.0);
        assert!((r.x[1] - 1.0).abs() < 1e-8);
        assert_eq!(r.at_bound, 1);
    }

    /// Quadratic that also reports its exact Hessian diagonal.
    struct DiagQuadratic(Quadratic);

    impl Objective for DiagQuadratic {
        fn value_grad(&mut self, x: &[f64], grad: &mut [f64]) -> f64 {
            self.0.value_grad(x, grad)
        }

        fn hessian_diag(&mut self, _x: &[f64]) -> Option<Vec<f64>> {
            Some(self.0.scale.clone())
        }
    }

    #[test]
    fn exact_diagonal_solves_separable_problems_at_once() {
        let scale = vec![1e4, 1.0, 1e-3];
        for method in [Method::Lbfgs, Method::DiagQn] {
            let mut q = DiagQuadratic(Quadratic { a: vec![1.0, -2.0, 3.0], scale: scale.clone() });
            let opts = OptimizerOpts { method, grad_tol: 1e-10, ..Default::default() };
            let r = minimize(&mut q, &[0.0; 3], &opts).unwrap();
            assert!(r.converged && r.iters == 1, "{method:?}: {} iterations", r.iters);
        }
    }

    #[test]
    fn diagonal_scaling_stops_at_the_box() {
        // the scaled direction points outward on both coordinates
        let mut q = DiagQuadratic(Quadratic { a: vec![100.0, -100.0, 2.0], scale: vec![1.0, 4.0, 0.5] });
        let opts = OptimizerOpts { bound: Some(40.0), grad_tol: 1e-9, ..Default::default() };
        let r = minimize(&mut q, &[0.0; 3], &opts).unwrap();
        assert!(r.converged, "{:?}", r.message);
        assert_eq!(&r.x[..2], &[40.0, -40.0]);
        assert!((r.x[2] - 2.0).abs() < 1e-8);
    }

    #[test]
    fn step_cap_limits_each_move() {
        let mut q = DiagQuadratic(Quadratic { a: vec![10.0, -3.0], scale: vec![1.0, 1.0] });
        let opts = OptimizerOpts { max_step: Some(1.0), grad_tol: 1e-9, ..Default::default() };
        let r = minimize(&mut q, &[0.0; 2], &opts).unwrap();
        assert!(r.converged);
        assert!(r.iters >= 10, "reached 10 in {} unit steps", r.iters);
        assert!((r.x[0] - 10.0).abs() < 1e-8);
        let bad = OptimizerOpts { max_step: Some(0.0), ..Default::default() };
        assert!(matches!(minimize(&mut q, &[0.0; 2], &bad), Err(OptError::InvalidOptions(_))));
    }

    #[test]
    fn newton_without_hessian_is_an_error() {
        let mut obj = FnObjective(|x: &[f64]| (x[0] * x[0], vec![2.0 * x[0]]));
        let opts = OptimizerOpts { method: Method::Newton, ..Default::default() };
        assert!(matches!(minimize(&mut obj, &[1.0], &opts), Err(OptError::MissingHessian)));
    }

    #[test]
    fn rejects_bad_options_and_nonfinite_start() {
        let mut obj = FnObjective(|x: &[f64]| (x[0] * x[0], vec![2.0 * x[0]]));
        let opts = OptimizerOpts { wolfe_c1: 0.95, ..Default::default() };
        assert!(matches!(minimize(&mut obj, &[1.0], &opts), Err(OptError::InvalidOptions(_))));
        let mut bad = FnObjective(|_x: &[f64]| (f64::NAN, vec![0.0]));
        assert!(matches!(minimize(&mut bad, &[1.0], &OptimizerOpts::default()), Err(OptError::NonFinite)));
    }

    #[test]
    fn deterministic_traces() {
        let run = || {
            let mut q = Quadratic { a: vec![1.0, 2.0, 3.0], scale: vec![5.0, 1.0, 0.2] };
            let r = minimize(&mut q, &[0.0; 3], &OptimizerOpts::default()).unwrap();
            r.trace.iter().map(|t| (t.value, t.grad_norm)).collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn trace_csv_header() {
        let mut q = Quadratic { a: vec![1.0], scale: vec![1.0] };
        let r = minimize(&mut q, &[0.0], &OptimizerOpts::default()).unwrap();
        assert!(r.trace_csv().starts_with("iter,value,grad_norm,seconds\n0,"));
    }
}
