//! Panel Gauss–Legendre quadrature, adaptive or fixed.

use std::collections::BinaryHeap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points of the per-panel Gauss rule.
pub const GAUSS_ORDER: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum QuadratureMethod {
    /// Bisect the worst panel until the summed error estimate meets the tolerance.
    Adaptive,
    /// Equal panels, no error control.
    FixedPanels(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub method: QuadratureMethod,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            method: QuadratureMethod::Adaptive,
            abs_tol: 1e-10,
            max_subdivisions: 1 << 14,
        }
    }
}

impl QuadratureSpec {
    pub fn fixed(panels: usize) -> Self {
        Self {
            method: QuadratureMethod::FixedPanels(panels),
            ..Self::default()
        }
    }

    pub fn with_tolerance(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::param("abs_tol", "tolerance must be positive"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::param("max_subdivisions", "must be at least 1"));
        }
        if let QuadratureMethod::FixedPanels(0) = self.method {
            return Err(Error::param("panels", "must be at least 1"));
        }
        Ok(())
    }
}

/// Nodes and weights on `[-1, 1]`, from Newton iteration on `P_k`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let k = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (k + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=order {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let p = if order == 1 { x } else { p1 };
            let pm1 = if order == 1 { 1.0 } else { p0 };
            dp = k * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GAUSS_ORDER))
}

fn panel<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<f64> {
    let (x, w) = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        acc += wi * f(mid + half * xi)?;
    }
    Ok(acc * half)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn split<F: FnMut(f64) -> Result<f64>>(
    f: &mut F,
    a: f64,
    b: f64,
    whole: f64,
) -> Result<(Panel, Panel)> {
    let m = 0.5 * (a + b);
    let left = panel(f, a, m)?;
    let right = panel(f, m, b)?;
    let err = (left + right - whole).abs();
    Ok((
        Panel {
            a,
            b: m,
            value: left,
            error: 0.5 * err,
        },
        Panel {
            a: m,
            b,
            value: right,
            error: 0.5 * err,
        },
    ))
}

/// Integrates `f` over each interval between consecutive `breaks`.
pub fn integrate<F>(mut f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    let intervals: Vec<(f64, f64)> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], w[1]))
        .collect();
    match spec.method {
        QuadratureMethod::FixedPanels(k) => {
            let mut total = 0.0;
            for &(a, b) in &intervals {
                let h = (b - a) / k as f64;
                for i in 0..k {
                    total += panel(&mut f, a + h * i as f64, a + h * (i + 1) as f64)?;
                }
            }
            Ok(total)
        }
        QuadratureMethod::Adaptive => {
            let mut heap = BinaryHeap::new();
            for &(a, b) in &intervals {
                let whole = panel(&mut f, a, b)?;
                let (l, r) = split(&mut f, a, b, whole)?;
                heap.push(l);
                heap.push(r);
            }
            loop {
                let (value, error) = heap
                    .iter()
                    .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
                if error <= spec.abs_tol {
                    return Ok(value);
                }
                if heap.len() >= spec.max_subdivisions {
                    return Err(Error::ToleranceNotMet {
                        best: value,
                        error,
                        tolerance: spec.abs_tol,
                    });
                }
                let worst = heap.pop().expect("at least one panel");
                let (l, r) = split(&mut f, worst.a, worst.b, worst.value)?;
                heap.push(l);
                heap.push(r);
            }
        }
    }
}
