//! Bloch-type densities and prenorms, the sharp Lipschitz constant, the
//! extremal profile with its root, and the distortion bounds for normalized maps.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball_geometry::{BallPoint, BALL_LIMIT};
use crate::error::{Error, Result};
use crate::holo::{HoloMap, PolynomialMap};
use crate::optim::{minimize, SimplexOptions};
use crate::sampling::{axis_grid, ball_points, stream};

/// Dimension `n` and weight exponent `α` of the class `P(n, α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochParams {
    n: usize,
    alpha: f64,
}

impl BlochParams {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "dimension must be at least 1"));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::param(
                "alpha",
                format!("must be positive, got {alpha}"),
            ));
        }
        Ok(Self { n, alpha })
    }

    /// `α = 1`, the class of the Lipschitz theorems.
    pub fn unweighted(n: usize) -> Result<Self> {
        Self::new(n, 1.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `α(n+1)`, the exponent that recurs in the profile and the distortion bounds.
    pub fn k(&self) -> f64 {
        self.alpha * (self.n as f64 + 1.0)
    }
}

/// `D_f^{n,α}(z) = (1 − |z|²)^{α(n+1)/(2n)} |det f′(z)|^{1/n}`.
pub fn density(f: &HoloMap, z: &BallPoint, p: &BlochParams) -> Result<f64> {
    if f.dim() != p.n {
        return Err(Error::DimensionMismatch {
            expected: p.n,
            got: f.dim(),
        });
    }
    let det = f.jacobian_det(z)?;
    Ok(density_from_det(det, z.weight(), p))
}

pub(crate) fn density_from_det(det: Complex64, weight: f64, p: &BlochParams) -> f64 {
    let n = p.n as f64;
    if det == Complex64::new(0.0, 0.0) {
        return 0.0;
    }
    weight.powf(p.k() / (2.0 * n)) * det.norm().powf(1.0 / n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrenormBudget {
    /// Quasi-random ball samples (an axis grid is added on top).
    pub samples: usize,
    /// Best samples handed to local refinement.
    pub refine_top: usize,
    pub max_iters: u64,
    pub tolerance: f64,
}

impl Default for PrenormBudget {
    fn default() -> Self {
        Self {
            samples: 4096,
            refine_top: 10,
            max_iters: 3000,
            tolerance: 1e-15,
        }
    }
}

/// Lower certificate of `sup_z D_f(z)` with the point achieving it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrenormEstimate {
    pub value: f64,
    pub arg: BallPoint,
    pub samples: usize,
    pub seed: u64,
    pub iterations: u64,
    pub converged: bool,
}

fn density_at_params(f: &HoloMap, x: &[f64], p: &BlochParams) -> Option<f64> {
    let z = BallPoint::from_interleaved(x).ok()?;
    density(f, &z, p).ok()
}

/// Maximizes the density: quasi-random samples plus an axis grid, then
/// Nelder–Mead from the best `refine_top` samples. Deterministic in `seed`.
pub fn prenorm(
    f: &HoloMap,
    p: &BlochParams,
    budget: &PrenormBudget,
    seed: u64,
) -> Result<PrenormEstimate> {
    if budget.samples == 0 || budget.refine_top == 0 {
        return Err(Error::param(
            "budget",
            "sample and refinement counts must be positive",
        ));
    }
    if f.dim() != p.n {
        return Err(Error::DimensionMismatch {
            expected: p.n,
            got: f.dim(),
        });
    }
    let n = p.n;
    let mut points = ball_points(n, budget.samples, BALL_LIMIT, seed);
    points.extend(axis_grid(n, 24, 16));
    let values: Vec<f64> = points
        .par_iter()
        .map(|z| density(f, z, p).unwrap_or(f64::NEG_INFINITY))
        .collect();
    let mut order: Vec<usize> = (0..points.len())
        .filter(|&i| values[i].is_finite())
        .collect();
    if order.is_empty() {
        return Err(Error::Degenerate(
            "density undefined at every sample".into(),
        ));
    }
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    order.truncate(budget.refine_top);

    let objective = |x: &[f64]| -> f64 {
        match density_at_params(f, x, p) {
            Some(v) => -v,
            None => {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                1.0 + (r - BALL_LIMIT).max(0.0)
            }
        }
    };
    let refined: Vec<(f64, BallPoint, u64, bool)> = order
        .par_iter()
        .map(|&i| {
            let start = &points[i];
            let opts = SimplexOptions {
                step: (0.5 * (1.0 - start.norm())).min(0.05),
                tolerance: budget.tolerance,
                max_iters: budget.max_iters,
            };
            let local = minimize(&objective, &start.to_interleaved(), opts);
            match BallPoint::from_interleaved(&local.x) {
                Ok(z) if -local.value >= values[i] => {
                    (-local.value, z, local.iterations, local.converged)
                }
                _ => (values[i], start.clone(), local.iterations, local.converged),
            }
        })
        .collect();
    let iterations = refined.iter().map(|r| r.2).sum();
    let converged = refined.iter().all(|r| r.3);
    let (_, arg) = refined
        .into_iter()
        .map(|(v, z, _, _)| (v, z))
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .expect("at least one refinement");
    // re-evaluate so that density(f, arg) reproduces value exactly
    let value = density(f, &arg, p)?;
    Ok(PrenormEstimate {
        value,
        arg,
        samples: points.len(),
        seed,
        iterations,
        converged,
    })
}

/// A map rescaled so that its prenorm estimate is one.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub map: HoloMap,
    /// Factor `c` with `map = c·original`.
    pub factor: f64,
    pub estimate: PrenormEstimate,
}

/// Divides `f` by its prenorm estimate (density is homogeneous of degree one in `f`).
pub fn normalize(
    f: &HoloMap,
    p: &BlochParams,
    budget: &PrenormBudget,
    seed: u64,
) -> Result<Normalized> {
    let est = prenorm(f, p, budget, seed)?;
    if !(est.value > 0.0) {
        return Err(Error::Degenerate("prenorm estimate is zero".into()));
    }
    let factor = 1.0 / est.value;
    let map = f.clone().scaled(Complex64::new(factor, 0.0));
    let estimate = PrenormEstimate {
        value: density(&map, &est.arg, p)?,
        ..est
    };
    Ok(Normalized {
        map,
        factor,
        estimate,
    })
}

/// `count` random polynomial maps of total degree `≤ degree`, each normalized.
/// Map `i` draws its coefficients from stream `i` of `seed`.
pub fn random_normalized_polynomials(
    n: usize,
    count: usize,
    degree: u32,
    seed: u64,
    budget: &PrenormBudget,
) -> Result<Vec<Normalized>> {
    random_normalized_polynomials_in(&BlochParams::unweighted(n)?, count, degree, seed, budget)
}

/// As [`random_normalized_polynomials`], normalized in the class `P(n, α)` of `p`.
pub fn random_normalized_polynomials_in(
    p: &BlochParams,
    count: usize,
    degree: u32,
    seed: u64,
    budget: &PrenormBudget,
) -> Result<Vec<Normalized>> {
    let n = p.n;
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i as u64);
            // a vanishing Jacobian everywhere has probability zero; redraw if it happens
            for attempt in 0..8u64 {
                let f = HoloMap::Polynomial(PolynomialMap::random(n, degree, &mut rng));
                match normalize(
                    &f,
                    p,
                    budget,
                    seed.wrapping_add(i as u64).wrapping_add(attempt << 32),
                ) {
                    Ok(nm) => return Ok(nm),
                    Err(Error::Degenerate(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
            Err(Error::Degenerate(format!(
                "map {i}: degenerate after redraws"
            )))
        })
        .collect()
}

/// `M(n) = (2+n)^{1/(2n)} ((n+2)/(n+1))^{(n+1)/(2n)}`.
pub fn constant_m(n: usize) -> f64 {
    let nf = n as f64;
    (2.0 + nf).powf(1.0 / (2.0 * nf)) * ((nf + 2.0) / (nf + 1.0)).powf((nf + 1.0) / (2.0 * nf))
}

/// Lipschitz constant for the disk from earlier work, kept as a baseline.
pub const PRIOR_DISK_CONSTANT: f64 = 3.31;

/// `a₀(α) = 1/√(α(n+1) + 1)`.
pub fn a0(alpha: f64, n: usize) -> f64 {
    1.0 / (alpha * (n as f64 + 1.0) + 1.0).sqrt()
}

/// `φ(x) = x (1−x²)^{k/2} √(k+1) ((k+1)/k)^{k/2}` with `k = α(n+1)`; increasing
/// on `[0, a₀]`, decreasing on `[a₀, 1]`, with `φ(a₀) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaCProfile {
    params: BlochParams,
    a0: f64,
}

impl LemmaCProfile {
    pub fn new(params: BlochParams) -> Self {
        Self {
            params,
            a0: a0(params.alpha, params.n),
        }
    }

    pub fn params(&self) -> BlochParams {
        self.params
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// `k = α(n+1)`.
    pub fn k(&self) -> f64 {
        self.params.k()
    }

    fn value_unchecked(&self, x: f64) -> f64 {
        let k = self.k();
        x * (1.0 - x * x).powf(k / 2.0) * (k + 1.0).sqrt() * ((k + 1.0) / k).powf(k / 2.0)
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::param("x", format!("{x} outside [0, 1]")));
        }
        Ok(self.value_unchecked(x))
    }
}

pub fn lemma_c_profile(x: f64, profile: &LemmaCProfile) -> Result<f64> {
    profile.value(x)
}

/// The root `m_α(λ)` of `φ(x) = λ` on `[0, a₀]`, by bisection down to adjacent floats.
pub fn m_root(lambda: f64, profile: &LemmaCProfile) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::param("lambda", format!("{lambda} outside (0, 1]")));
    }
    if lambda == 1.0 {
        return Ok(profile.a0);
    }
    let (mut lo, mut hi) = (0.0, profile.a0);
    let mut best = (f64::INFINITY, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let r = profile.value_unchecked(mid) - lambda;
        if r.abs() < best.0 {
            best = (r.abs(), mid);
        }
        if r == 0.0 {
            break;
        }
        if r < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(best.1)
}

/// `λ = φ(m)` for the profile at `α = 1`.
///
/// Defined on all of `(0, 1)`; `m ≤ a₀(1)` is the branch on which this inverts [`m_root`].
pub fn lambda_of_m(m: f64, n: usize) -> Result<f64> {
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::param("m", format!("{m} outside (0, 1)")));
    }
    let profile = LemmaCProfile::new(BlochParams::unweighted(n)?);
    Ok(profile.value_unchecked(m))
}

/// Distortion bounds on `|det f′(z)|` at `|z| = r` for `‖f‖ = 1`, `det f′(0) = λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortionBounds {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    /// Radius up to which the lower bound holds: `(a₀ + m)/(1 + a₀ m)`.
    pub r_low: f64,
    /// Radius up to which the upper bound holds: `(a₀ − m)/(1 − a₀ m)`.
    pub r_high: f64,
    pub m: f64,
}

/// `λ(m−r)/(m(1−mr)^{k+1})`.
pub fn distortion_lower(lambda: f64, m: f64, r: f64, k: f64) -> f64 {
    lambda * (m - r) / (m * (1.0 - m * r).powf(k + 1.0))
}

/// `λ(m+r)/(m(1+mr)^{k+1})`.
pub fn distortion_upper(lambda: f64, m: f64, r: f64, k: f64) -> f64 {
    lambda * (m + r) / (m * (1.0 + m * r).powf(k + 1.0))
}

pub fn theorem_d_bounds(lambda: f64, r: f64, profile: &LemmaCProfile) -> Result<DistortionBounds> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::param("r", format!("{r} outside [0, 1)")));
    }
    let m = m_root(lambda, profile)?;
    let a = profile.a0;
    let k = profile.k();
    let r_low = (a + m) / (1.0 + a * m);
    let r_high = ((a - m) / (1.0 - a * m)).max(0.0);
    Ok(DistortionBounds {
        lower: (r <= r_low).then(|| distortion_lower(lambda, m, r, k)),
        upper: (r <= r_high).then(|| distortion_upper(lambda, m, r, k)),
        r_low,
        r_high,
        m,
    })
}
