//! Distortion bounds on `det f′` for normalized maps with `det f′(0) = λ > 0`.

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{
    point_repr, ReportParams, SampleInputs, Tally, Tolerances, VerificationReport,
};
use crate::ball_geometry::{mobius_auto, BallPoint};
use crate::bloch::{
    density, distortion_lower, distortion_upper, m_root, prenorm, BlochParams, LemmaCProfile,
    PrenormBudget,
};
use crate::error::{Error, Result};
use crate::holo::{compose, extremal_map, rotate_to_positive_det, HoloMap};
use crate::sampling::ball_points;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremDOptions {
    /// Points per map for each of the two bounds.
    pub samples: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub prenorm_budget: PrenormBudget,
    /// Radii in `[0, m]` at which the extremal map must meet the lower bound exactly.
    pub saturation_radii: usize,
    pub saturation_tolerance: f64,
    pub collect_rows: bool,
}

impl Default for TheoremDOptions {
    fn default() -> Self {
        Self {
            samples: 2000,
            seed: 0,
            tolerances: Tolerances::default(),
            prenorm_budget: PrenormBudget::default(),
            saturation_radii: 10,
            saturation_tolerance: 1e-12,
            collect_rows: false,
        }
    }
}

/// A map with `det h′(0) = λ > 0` ready for the bound checks.
struct Subject {
    map: HoloMap,
    lambda: f64,
    map_index: Option<usize>,
}

/// Finds `a` on the ray from `start` outward with `D_f(a)^n = λ`, by bisection.
fn retarget_point(
    f: &HoloMap,
    start: &BallPoint,
    lambda: f64,
    p: &BlochParams,
) -> Result<Option<BallPoint>> {
    let n = p.n();
    let dir: Vec<Complex64> = if start.norm() > 1e-9 {
        start.coords().iter().map(|c| c / start.norm()).collect()
    } else {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[0] = Complex64::new(1.0, 0.0);
        v
    };
    let far = BallPoint::new(dir.iter().map(|c| c * 0.999).collect())?;
    let value = |z: &BallPoint| -> Result<f64> { Ok(density(f, z, p)?.powi(n as i32)) };
    let along = |s: f64| -> Result<BallPoint> {
        BallPoint::new(
            start
                .coords()
                .iter()
                .zip(far.coords())
                .map(|(a, b)| a * (1.0 - s) + b * s)
                .collect(),
        )
    };
    if value(start)? < lambda || value(&far)? > lambda {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if value(&along(mid)?)? >= lambda {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(along(0.5 * (lo + hi))?))
}

fn record_bounds(
    subject: &Subject,
    profile: &LemmaCProfile,
    points: &[BallPoint],
    opts: &TheoremDOptions,
    lower: &mut Tally,
    upper: &mut Tally,
) -> Result<()> {
    let n = profile.params().n() as f64;
    let k = profile.k();
    let lambda = subject.lambda.min(1.0);
    let m = m_root(lambda, profile)?;
    let a = profile.a0();
    let r_low = (a + m) / (1.0 + a * m);
    let r_high = ((a - m) / (1.0 - a * m)).max(0.0);
    let tol = |bound: f64| {
        opts.tolerances.assertion * bound.abs().max(1.0)
            + 10.0 * n * opts.tolerances.sup_relative * (bound.abs() + subject.lambda)
    };
    for z in points {
        let r = z.norm();
        let inputs = |bound_radius: f64| SampleInputs {
            map_index: subject.map_index,
            points: vec![point_repr(z.coords())],
            scalars: vec![subject.lambda, m, bound_radius],
        };
        let det = subject.map.jacobian_det(z)?;
        if r <= r_low {
            let bound = distortion_lower(subject.lambda, m, r, k);
            let b = bound - tol(bound);
            lower.record(
                inputs(r_low),
                det.re,
                b,
                if bound.abs() > 0.0 {
                    det.re / bound
                } else {
                    0.0
                },
            );
        }
        if r <= r_high {
            let bound = distortion_upper(subject.lambda, m, r, k);
            let b = bound + tol(bound);
            upper.record(inputs(r_high), det.norm(), b, det.norm() / bound);
        }
    }
    Ok(())
}

/// Points for one subject: quasi-random points of the ball of radius
/// `max(r_low, r_high)` plus a radial segment along the first axis.
fn subject_points(n: usize, radius: f64, count: usize, seed: u64) -> Result<Vec<BallPoint>> {
    let mut points = ball_points(n, count, radius, seed);
    for j in 0..=32 {
        points.push(BallPoint::on_axis(
            Complex64::new(radius * j as f64 / 32.0, 0.0),
            n,
        )?);
    }
    Ok(points)
}

/// Checks the distortion bounds on the extremal maps `f_λ` (with saturation of
/// the lower bound along `[0, m]`) and on a normalized battery. For `α = 1`
/// each battery map is pulled back by the automorphism that moves a point of
/// density `λ^{1/n}` to the origin, one target per grid value; otherwise each
/// map is checked at its own `λ = |det f′(0)|`.
pub fn check_theorem_d(
    lambdas: &[f64],
    params: BlochParams,
    battery: &[HoloMap],
    opts: &TheoremDOptions,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let n = params.n();
    let profile = LemmaCProfile::new(params);
    for &l in lambdas {
        if !(l > 0.0 && l <= 1.0) {
            return Err(Error::param("lambda", format!("{l} outside (0, 1]")));
        }
    }
    if lambdas.is_empty() && battery.is_empty() {
        return Err(Error::param("lambdas", "nothing to check"));
    }
    for f in battery {
        if f.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: f.dim(),
            });
        }
    }
    let unweighted = (params.alpha() - 1.0).abs() < 1e-15;
    let mut report = VerificationReport::new(
        "thmD",
        ReportParams {
            n,
            alpha: params.alpha(),
            samples: opts.samples,
            seed: opts.seed,
            tolerances: opts.tolerances.clone(),
        },
    );

    let mut saturation = Tally::upper("saturation", opts.collect_rows);
    let mut subjects = Vec::new();
    if unweighted {
        for &lambda in lambdas {
            let m = m_root(lambda, &profile)?;
            let f = extremal_map(m, n)?;
            let steps = opts.saturation_radii.max(2) - 1;
            for j in 0..=steps {
                let t = m * j as f64 / steps as f64;
                let z = BallPoint::on_axis(Complex64::new(t, 0.0), n)?;
                let det = f.jacobian_det(&z)?;
                let bound = distortion_lower(lambda, m, t, profile.k());
                let gap = (det - bound).norm();
                saturation.record(
                    SampleInputs {
                        map_index: None,
                        points: vec![point_repr(z.coords())],
                        scalars: vec![lambda, m],
                    },
                    gap,
                    opts.saturation_tolerance * bound.abs().max(1.0),
                    gap,
                );
            }
            let lambda_actual = f.jacobian_det(&BallPoint::origin(n))?.re;
            subjects.push(Subject {
                map: f,
                lambda: lambda_actual,
                map_index: None,
            });
        }
    } else if !lambdas.is_empty() {
        report
            .notes
            .push("extremal saturation applies to alpha = 1 only; lambda grid used for battery checks only".into());
    }

    let prepared: Vec<(Vec<Subject>, Vec<String>)> = battery
        .par_iter()
        .enumerate()
        .map(|(i, f)| -> Result<(Vec<Subject>, Vec<String>)> {
            let est = prenorm(
                f,
                &params,
                &opts.prenorm_budget,
                opts.seed.wrapping_add(i as u64),
            )?;
            if (est.value - 1.0).abs() > opts.tolerances.sup_relative {
                return Err(Error::NotNormalized {
                    index: i,
                    estimate: est.value,
                });
            }
            let mut out = Vec::new();
            let mut notes = Vec::new();
            let targets: Vec<Option<f64>> = if unweighted && !lambdas.is_empty() {
                lambdas.iter().map(|&l| Some(l)).collect()
            } else {
                vec![None]
            };
            for target in targets {
                let g = match target {
                    Some(lambda) => match retarget_point(f, &est.arg, lambda, &params)? {
                        Some(a) if a.is_origin() => f.clone(),
                        Some(a) => compose(f, &mobius_auto(&a))?,
                        None => {
                            notes.push(format!(
                                "map {i}: lambda {lambda} not reachable on the search ray"
                            ));
                            continue;
                        }
                    },
                    None => f.clone(),
                };
                match rotate_to_positive_det(&g) {
                    Ok(pd) => {
                        if pd.lambda > 1.0 {
                            notes.push(format!(
                                "map {i}: lambda {} above one clamped in the root",
                                pd.lambda
                            ));
                        }
                        out.push(Subject {
                            map: pd.map,
                            lambda: pd.lambda,
                            map_index: Some(i),
                        });
                    }
                    Err(Error::Degenerate(_)) => {
                        notes.push(format!("map {i}: det f'(0) = 0, skipped"))
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok((out, notes))
        })
        .collect::<Result<_>>()?;
    for (s, notes) in prepared {
        subjects.extend(s);
        report.notes.extend(notes);
    }

    let tallies: Vec<(Tally, Tally)> = subjects
        .par_iter()
        .enumerate()
        .map(|(si, subject)| -> Result<(Tally, Tally)> {
            let mut lower = Tally::lower("lower", opts.collect_rows);
            let mut upper = Tally::upper("upper", opts.collect_rows);
            let m = m_root(subject.lambda.min(1.0), &profile)?;
            let a = profile.a0();
            let r_low = (a + m) / (1.0 + a * m);
            let r_high = ((a - m) / (1.0 - a * m)).max(0.0);
            let points = subject_points(
                n,
                r_low.max(r_high),
                opts.samples,
                opts.seed.wrapping_add(si as u64),
            )?;
            record_bounds(subject, &profile, &points, opts, &mut lower, &mut upper)?;
            Ok((lower, upper))
        })
        .collect::<Result<_>>()?;
    let mut lower = Tally::lower("lower", opts.collect_rows);
    let mut upper = Tally::upper("upper", opts.collect_rows);
    for (l, u) in tallies {
        lower.merge(l);
        upper.merge(u);
    }
    report
        .details
        .insert("subjects".into(), subjects.len() as f64);
    report
        .details
        .insert("lambdas".into(), lambdas.len() as f64);
    saturation.into_report(&mut report);
    lower.into_report(&mut report);
    upper.into_report(&mut report);
    Ok(report.finalize(started))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{normalize, random_normalized_polynomials};

    #[test]
    fn extremal_saturates_lower_bound() {
        let params = BlochParams::unweighted(2).unwrap();
        let opts = TheoremDOptions {
            samples: 200,
            ..Default::default()
        };
        let report = check_theorem_d(&[0.25, 0.5, 0.9], params, &[], &opts).unwrap();
        assert!(report.pass, "{:?}", report.violations.first());
        assert!(report.details["saturation.max_ratio"] < 1e-12);
    }

    #[test]
    fn random_maps_respect_bounds() {
        let budget = PrenormBudget {
            samples: 512,
            ..Default::default()
        };
        let battery: Vec<HoloMap> = random_normalized_polynomials(1, 3, 3, 21, &budget)
            .unwrap()
            .into_iter()
            .map(|nm| nm.map)
            .collect();
        let opts = TheoremDOptions {
            samples: 300,
            seed: 21,
            prenorm_budget: budget,
            ..Default::default()
        };
        let params = BlochParams::unweighted(1).unwrap();
        let report = check_theorem_d(&[0.3, 0.7], params, &battery, &opts).unwrap();
        assert!(
            report.pass,
            "{:?} {:?}",
            report.violations.first(),
            report.notes
        );
        assert!(report.details["subjects"] >= 4.0);
    }

    #[test]
    fn weighted_class_uses_natural_lambda() {
        let budget = PrenormBudget {
            samples: 512,
            ..Default::default()
        };
        let params = BlochParams::new(1, 2.0).unwrap();
        let f = HoloMap::Polynomial(crate::holo::PolynomialMap::univariate(&[
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.3, 0.2),
        ]));
        let nm = normalize(&f, &params, &budget, 0).unwrap();
        let opts = TheoremDOptions {
            samples: 300,
            prenorm_budget: budget,
            ..Default::default()
        };
        let report = check_theorem_d(&[], params, &[nm.map], &opts).unwrap();
        assert!(report.pass, "{:?}", report.violations.first());
        assert_eq!(report.details["subjects"], 1.0);
    }

    #[test]
    fn rejects_bad_lambda() {
        let params = BlochParams::unweighted(1).unwrap();
        assert!(check_theorem_d(&[1.5], params, &[], &TheoremDOptions::default()).is_err());
    }
}
