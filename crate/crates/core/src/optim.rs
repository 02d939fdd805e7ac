//! Derivative-free local minimization, backed by argmin's Nelder–Mead.

use argmin::core::{CostFunction, Executor, State, TerminationReason, TerminationStatus};
use argmin::solver::neldermead::NelderMead;

#[derive(Debug, Clone, PartialEq)]
pub struct LocalMin {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: u64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Edge length of the initial axis-aligned simplex.
    pub step: f64,
    /// Standard-deviation tolerance on the simplex values.
    pub tolerance: f64,
    pub max_iters: u64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            step: 0.05,
            tolerance: 1e-15,
            max_iters: 2000,
        }
    }
}

struct Objective<'a>(&'a (dyn Fn(&[f64]) -> f64 + Sync));

impl CostFunction for Objective<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> Result<f64, argmin::core::Error> {
        let v = (self.0)(p);
        Ok(if v.is_nan() { f64::MAX } else { v })
    }
}

/// Minimizes `f` from `x0`. Never fails: the best vertex seen is returned.
pub fn minimize(f: &(dyn Fn(&[f64]) -> f64 + Sync), x0: &[f64], opts: SimplexOptions) -> LocalMin {
    let f0 = f(x0);
    let fallback = LocalMin {
        x: x0.to_vec(),
        value: f0,
        iterations: 0,
        converged: false,
    };
    let mut simplex = vec![x0.to_vec()];
    for i in 0..x0.len() {
        let mut v = x0.to_vec();
        v[i] += opts.step;
        simplex.push(v);
    }
    let solver = match NelderMead::new(simplex).with_sd_tolerance(opts.tolerance) {
        Ok(s) => s,
        Err(_) => return fallback,
    };
    let run = Executor::new(Objective(f), solver)
        .configure(|s| s.max_iters(opts.max_iters))
        .run();
    let Ok(res) = run else { return fallback };
    let state = res.state();
    let converged = matches!(
        state.get_termination_status(),
        TerminationStatus::Terminated(TerminationReason::SolverConverged)
    );
    match state.get_best_param() {
        Some(x) if state.get_best_cost() <= f0 => LocalMin {
            x: x.clone(),
            value: state.get_best_cost(),
            iterations: state.get_iter(),
            converged,
        },
        _ => LocalMin {
            iterations: state.get_iter(),
            converged,
            ..fallback
        },
    }
}
