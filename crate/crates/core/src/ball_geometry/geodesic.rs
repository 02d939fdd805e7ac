//! Bergman distance as an infimum of curve lengths over a finite-dimensional family.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::curve::{curve_length, Curve, FnCurve, GeodesicArc, Segment, SplineCurve};
use super::point::{norm_sqr, BallPoint, BALL_LIMIT};
use super::quadrature::QuadratureSpec;
use crate::error::{Error, Result};
use crate::optim::{minimize, SimplexOptions};

/// Curves with pinned endpoints and `interior` free control points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CurveFamily {
    Spline { interior: usize },
    Polyline { interior: usize },
}

impl Default for CurveFamily {
    fn default() -> Self {
        CurveFamily::Spline { interior: 8 }
    }
}

impl CurveFamily {
    pub fn interior(&self) -> usize {
        match *self {
            CurveFamily::Spline { interior } | CurveFamily::Polyline { interior } => interior,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicBudget {
    /// Nelder–Mead iterations per start.
    pub max_iters: u64,
    pub tolerance: f64,
    /// Gauss panels per knot interval while optimizing.
    pub panels_per_segment: usize,
}

impl Default for GeodesicBudget {
    fn default() -> Self {
        Self {
            max_iters: 4000,
            tolerance: 1e-13,
            panels_per_segment: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicResult {
    pub length: f64,
    pub knots: Vec<Vec<Complex64>>,
    pub converged: bool,
    pub iterations: u64,
}

fn polyline(knots: Vec<Vec<Complex64>>) -> impl Curve {
    let segments = knots.len() - 1;
    let n = knots[0].len();
    let locate = move |t: f64| -> (usize, f64) {
        let i = ((t * segments as f64).floor() as isize).clamp(0, segments as isize - 1) as usize;
        (i, t * segments as f64 - i as f64)
    };
    let k1 = knots.clone();
    let k2 = knots;
    FnCurve::new(
        n,
        move |t| {
            let (i, s) = locate(t);
            k1[i]
                .iter()
                .zip(&k1[i + 1])
                .map(|(a, b)| a + (b - a) * s)
                .collect()
        },
        move |t| {
            let (i, _) = locate(t);
            k2[i]
                .iter()
                .zip(&k2[i + 1])
                .map(|(a, b)| (b - a) * segments as f64)
                .collect()
        },
    )
    .with_breakpoints((0..=segments).map(|i| i as f64 / segments as f64).collect())
}

fn family_length(
    family: CurveFamily,
    knots: Vec<Vec<Complex64>>,
    spec: &QuadratureSpec,
) -> Result<f64> {
    match family {
        CurveFamily::Spline { .. } => curve_length(&SplineCurve::new(knots)?, spec),
        CurveFamily::Polyline { .. } => curve_length(&polyline(knots), spec),
    }
}

fn knots_from_params(z: &BallPoint, w: &BallPoint, x: &[f64]) -> Vec<Vec<Complex64>> {
    let n = z.dim();
    let mut knots = vec![z.coords().to_vec()];
    for chunk in x.chunks_exact(2 * n) {
        knots.push(
            chunk
                .chunks_exact(2)
                .map(|c| Complex64::new(c[0], c[1]))
                .collect(),
        );
    }
    knots.push(w.coords().to_vec());
    knots
}

fn params_from_curve<C: Curve>(curve: &C, interior: usize) -> Vec<f64> {
    (1..=interior)
        .flat_map(|i| {
            let t = i as f64 / (interior + 1) as f64;
            curve.point(t).into_iter().flat_map(|c| [c.re, c.im])
        })
        .collect()
}

/// Minimizes curve length over `family` between `z` and `w`, multi-starting
/// from the straight chord and from the automorphism-pulled radius.
pub fn geodesic_infimum(
    z: &BallPoint,
    w: &BallPoint,
    family: CurveFamily,
    budget: GeodesicBudget,
) -> Result<GeodesicResult> {
    if z.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: z.dim(),
            got: w.dim(),
        });
    }
    if z == w {
        return Ok(GeodesicResult {
            length: 0.0,
            knots: vec![z.coords().to_vec(), w.coords().to_vec()],
            converged: true,
            iterations: 0,
        });
    }
    let interior = family.interior();
    let fast = QuadratureSpec::fixed(budget.panels_per_segment.max(1));
    let objective = |x: &[f64]| -> f64 {
        let knots = knots_from_params(z, w, x);
        if knots.iter().any(|k| norm_sqr(k) > BALL_LIMIT * BALL_LIMIT) {
            return f64::MAX;
        }
        family_length(family, knots, &fast).unwrap_or(f64::MAX)
    };
    let starts = [
        params_from_curve(&Segment::new(z, w)?, interior),
        params_from_curve(&GeodesicArc::new(z, w)?, interior),
    ];
    let opts = SimplexOptions {
        step: 0.02,
        tolerance: budget.tolerance,
        max_iters: budget.max_iters,
    };
    let accurate = QuadratureSpec::default();
    let mut best: Option<GeodesicResult> = None;
    for x0 in starts {
        let local = minimize(&objective, &x0, opts);
        let knots = knots_from_params(z, w, &local.x);
        let length = match family_length(family, knots.clone(), &accurate) {
            Ok(v) => v,
            Err(Error::ToleranceNotMet { best, .. }) => best,
            Err(e) => return Err(e),
        };
        let candidate = GeodesicResult {
            length,
            knots,
            converged: local.converged,
            iterations: local.iterations,
        };
        best = match best {
            Some(b) if b.length <= candidate.length => Some(b),
            _ => Some(candidate),
        };
    }
    Ok(best.expect("two starts"))
}
