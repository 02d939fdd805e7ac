//! The sharp Lipschitz estimate `|D_f(z) − D_f(w)| ≤ M(n) ‖f‖ ρ(z, w)^{1/n}`
//! and its sharpness along the extremal family.

use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{
    point_from_repr, point_repr, ReportParams, SampleInputs, Tally, Tolerances, VerificationReport,
};
use crate::ball_geometry::{pseudo_hyperbolic, BallPoint, BALL_LIMIT};
use crate::bloch::{constant_m, density, prenorm, BlochParams, PrenormBudget};
use crate::error::{Error, Result};
use crate::holo::{extremal_map, HoloMap};
use crate::optim::{minimize, SimplexOptions};
use crate::sampling::{random_ball_point, stream};

/// `|D_f(z₁) − D_f(z₂)| / ρ(z₁, z₂)^{1/n}` with `α = 1`.
pub fn lipschitz_ratio(f: &HoloMap, z1: &BallPoint, z2: &BallPoint, n: usize) -> Result<f64> {
    if z1 == z2 {
        return Err(Error::Degenerate("coincident points".into()));
    }
    let p = BlochParams::unweighted(n)?;
    let d1 = density(f, z1, &p)?;
    let d2 = density(f, z2, &p)?;
    let rho = pseudo_hyperbolic(z1, z2)?;
    if rho == 0.0 {
        return Err(Error::Degenerate(
            "pseudo-hyperbolic distance underflows".into(),
        ));
    }
    Ok((d1 - d2).abs() / rho.powf(1.0 / n as f64))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Options {
    /// Pairs sampled per map.
    pub pairs: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// Best pairs per map that are pushed further by local ascent of the ratio.
    pub refine_top: usize,
    pub refine_iters: u64,
    pub prenorm_budget: PrenormBudget,
    /// Replaces `M(n)` in the bound.
    pub constant_override: Option<f64>,
    pub collect_rows: bool,
}

impl Default for Theorem1Options {
    fn default() -> Self {
        Self {
            pairs: 10_000,
            seed: 0,
            tolerances: Tolerances::default(),
            refine_top: 3,
            refine_iters: 1500,
            prenorm_budget: PrenormBudget::default(),
            constant_override: None,
            collect_rows: false,
        }
    }
}

/// Pair strata: uniform, near-diagonal, near-boundary, and radial pairs on a common ray.
fn sample_pairs(
    n: usize,
    count: usize,
    seed: u64,
    index: usize,
) -> Vec<(BallPoint, BallPoint, &'static str)> {
    let mut rng = stream(seed, 0x5041_4952_0000 + index as u64);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let pair = match i % 20 {
            0..=10 => {
                let a = random_ball_point(&mut rng, n, BALL_LIMIT);
                let b = random_ball_point(&mut rng, n, BALL_LIMIT);
                (a, b, "uniform")
            }
            11..=14 => {
                let a = random_ball_point(&mut rng, n, 0.999);
                let delta = random_ball_point(&mut rng, n, 1e-3);
                let coords: Vec<Complex64> = a
                    .coords()
                    .iter()
                    .zip(delta.coords())
                    .map(|(x, d)| x + d)
                    .collect();
                match BallPoint::new(coords) {
                    Ok(b) => (a, b, "near_diagonal"),
                    Err(_) => continue,
                }
            }
            15..=17 => {
                let boundary = |rng: &mut rand_chacha::ChaCha20Rng| {
                    let dir = random_ball_point(rng, n, 1.0);
                    let len = dir.norm().max(1e-300);
                    let t = 0.9 + 0.099 * rng.gen::<f64>();
                    BallPoint::new(dir.coords().iter().map(|c| c * (t / len)).collect())
                };
                match (boundary(&mut rng), boundary(&mut rng)) {
                    (Ok(a), Ok(b)) => (a, b, "near_boundary"),
                    _ => continue,
                }
            }
            _ => {
                let dir = random_ball_point(&mut rng, n, 1.0);
                let len = dir.norm().max(1e-300);
                let (s, t) = (rng.gen::<f64>() * 0.999, rng.gen::<f64>() * 0.999);
                let on_ray =
                    |x: f64| BallPoint::new(dir.coords().iter().map(|c| c * (x / len)).collect());
                match (on_ray(s), on_ray(t)) {
                    (Ok(a), Ok(b)) => (a, b, "radial"),
                    _ => continue,
                }
            }
        };
        if pair.0 != pair.1 {
            out.push(pair);
        }
    }
    out
}

fn split(x: &[f64]) -> Option<(BallPoint, BallPoint)> {
    let half = x.len() / 2;
    let a = BallPoint::from_interleaved(&x[..half]).ok()?;
    let b = BallPoint::from_interleaved(&x[half..]).ok()?;
    (a != b).then_some((a, b))
}

fn pair_inputs(index: usize, a: &BallPoint, b: &BallPoint) -> SampleInputs {
    SampleInputs {
        map_index: Some(index),
        points: vec![point_repr(a.coords()), point_repr(b.coords())],
        scalars: Vec::new(),
    }
}

struct MapOutcome {
    tally: Tally,
    max_density: f64,
    prenorm: f64,
}

fn check_one(
    f: &HoloMap,
    index: usize,
    n: usize,
    opts: &Theorem1Options,
) -> Result<(Vec<(f64, SampleInputs)>, f64)> {
    let pairs = sample_pairs(n, opts.pairs, opts.seed, index);
    let mut evaluated = Vec::with_capacity(pairs.len());
    let mut max_density = 0.0f64;
    let p = BlochParams::unweighted(n)?;
    for (a, b, _) in &pairs {
        let ratio = lipschitz_ratio(f, a, b, n)?;
        max_density = max_density.max(density(f, a, &p)?).max(density(f, b, &p)?);
        evaluated.push((ratio, pair_inputs(index, a, b)));
    }
    let mut order: Vec<usize> = (0..evaluated.len()).collect();
    order.sort_by(|&i, &j| evaluated[j].0.total_cmp(&evaluated[i].0).then(i.cmp(&j)));
    let objective = |x: &[f64]| -> f64 {
        match split(x) {
            Some((a, b)) => lipschitz_ratio(f, &a, &b, n).map(|r| -r).unwrap_or(0.0),
            None => 0.0,
        }
    };
    for &i in order.iter().take(opts.refine_top) {
        let (a, b, _) = &pairs[i];
        let mut x0 = a.to_interleaved();
        x0.extend(b.to_interleaved());
        let local = minimize(
            &objective,
            &x0,
            SimplexOptions {
                step: 0.01,
                tolerance: 1e-14,
                max_iters: opts.refine_iters,
            },
        );
        if let Some((a, b)) = split(&local.x) {
            let ratio = lipschitz_ratio(f, &a, &b, n)?;
            max_density = max_density
                .max(density(f, &a, &p)?)
                .max(density(f, &b, &p)?);
            evaluated.push((ratio, pair_inputs(index, &a, &b)));
        }
    }
    Ok((evaluated, max_density))
}

/// Samples pairs for every map of a normalized battery and asserts
/// `ratio ≤ C·P·(1 + assertion) + C·P·sup_relative` where `C = M(n)` and `P`
/// is the larger of one and the largest density observed.
///
/// Maps whose prenorm estimate differs from one by more than `sup_relative`
/// are rejected with [`Error::NotNormalized`].
pub fn check_theorem1(
    battery: &[HoloMap],
    n: usize,
    opts: &Theorem1Options,
) -> Result<VerificationReport> {
    let started = Instant::now();
    if battery.is_empty() {
        return Err(Error::param("battery", "no maps"));
    }
    if opts.pairs == 0 {
        return Err(Error::param("pairs", "must be positive"));
    }
    let p = BlochParams::unweighted(n)?;
    for f in battery {
        if f.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: f.dim(),
            });
        }
    }
    let constant = opts.constant_override.unwrap_or_else(|| constant_m(n));
    let outcomes: Vec<MapOutcome> = battery
        .par_iter()
        .enumerate()
        .map(|(i, f)| -> Result<MapOutcome> {
            let est = prenorm(
                f,
                &p,
                &opts.prenorm_budget,
                opts.seed.wrapping_add(i as u64),
            )?;
            if (est.value - 1.0).abs() > opts.tolerances.sup_relative {
                return Err(Error::NotNormalized {
                    index: i,
                    estimate: est.value,
                });
            }
            let (evaluated, max_density) = check_one(f, i, n, opts)?;
            let p_eff = est.value.max(max_density).max(1.0);
            let bound = constant * p_eff * (1.0 + opts.tolerances.assertion)
                + constant * p_eff * opts.tolerances.sup_relative;
            let mut tally = Tally::upper("lipschitz", opts.collect_rows);
            for (ratio, inputs) in evaluated {
                tally.record(inputs, ratio, bound, ratio);
            }
            Ok(MapOutcome {
                tally,
                max_density,
                prenorm: est.value,
            })
        })
        .collect::<Result<_>>()?;

    let mut report = VerificationReport::new(
        "thm1",
        ReportParams {
            n,
            alpha: 1.0,
            samples: opts.pairs,
            seed: opts.seed,
            tolerances: opts.tolerances.clone(),
        },
    );
    report.details.insert("constant".into(), constant);
    report.details.insert("maps".into(), battery.len() as f64);
    let mut total = Tally::upper("lipschitz", opts.collect_rows);
    let mut max_density = 0.0f64;
    let mut max_prenorm = 0.0f64;
    for o in outcomes {
        max_density = max_density.max(o.max_density);
        max_prenorm = max_prenorm.max(o.prenorm);
        total.merge(o.tally);
    }
    report
        .details
        .insert("max_observed_density".into(), max_density);
    report
        .details
        .insert("max_prenorm_estimate".into(), max_prenorm);
    total.into_report(&mut report);
    Ok(report.finalize(started))
}

/// Recomputes the ratio of a stored violation or witness.
pub fn replay_theorem1(battery: &[HoloMap], inputs: &SampleInputs, n: usize) -> Result<f64> {
    let index = inputs
        .map_index
        .ok_or_else(|| Error::param("inputs", "no map index"))?;
    let f = battery
        .get(index)
        .ok_or_else(|| Error::param("inputs", format!("map index {index} out of range")))?;
    if inputs.points.len() != 2 {
        return Err(Error::param("inputs", "a pair of points is required"));
    }
    let a = point_from_repr(&inputs.points[0])?;
    let b = point_from_repr(&inputs.points[1])?;
    lipschitz_ratio(f, &a, &b, n)
}

/// One sharpness evaluation on the extremal family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessOutcome {
    pub n: usize,
    pub eps: f64,
    pub m: f64,
    pub lambda: f64,
    /// `|D(0) − D(m e₁)| / m^{1/n}`.
    pub ratio: f64,
    /// `M(n) − ε`.
    pub target: f64,
    pub pass: bool,
}

/// Parameter `m = [1 − (1 − ε/M)^{2n/(n+1)}]^{1/2}` whose extremal map has
/// Lipschitz ratio exactly `M − ε` on the pair `(0, m e₁)`.
pub fn sharpness_parameter(eps: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n", "dimension must be at least 1"));
    }
    let big_m = constant_m(n);
    if !(eps > 0.0 && eps < big_m) {
        return Err(Error::param("eps", format!("{eps} outside (0, {big_m})")));
    }
    let nf = n as f64;
    let m = (1.0 - (1.0 - eps / big_m).powf(2.0 * nf / (nf + 1.0))).sqrt();
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::param(
            "eps",
            format!("{eps} gives parameter {m} outside (0, 1)"),
        ));
    }
    Ok(m)
}

/// Evaluates the extremal map at `0` and at its critical point `m e₁` and
/// checks that the ratio reaches `M(n) − ε` up to `1e-9`.
pub fn sharpness_run(eps: f64, n: usize) -> Result<SharpnessOutcome> {
    let m = sharpness_parameter(eps, n)?;
    let f = extremal_map(m, n)?;
    let lambda = match &f {
        HoloMap::Extremal(e) => e.lambda(),
        _ => unreachable!("extremal_map builds the extremal variant"),
    };
    let origin = BallPoint::origin(n);
    let critical = BallPoint::on_axis(Complex64::new(m, 0.0), n)?;
    let ratio = lipschitz_ratio(&f, &origin, &critical, n)?;
    let target = constant_m(n) - eps;
    Ok(SharpnessOutcome {
        n,
        eps,
        m,
        lambda,
        ratio,
        target,
        pass: ratio >= target - 1e-9,
    })
}
