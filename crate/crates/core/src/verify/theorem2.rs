//! Disk estimates for the density gradient and for `f″`.

use std::f64::consts::TAU;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{
    point_repr, ReportParams, SampleInputs, Tally, Tolerances, VerificationReport,
};
use crate::ball_geometry::BallPoint;
use crate::bloch::{constant_m, density, prenorm, BlochParams, PrenormBudget};
use crate::error::{Error, Result};
use crate::holo::{HoloMap, PolynomialMap};
use crate::sampling::stream;

/// `|f′|` below which a point counts as critical and the gradient is not defined.
pub const CRITICAL_THRESHOLD: f64 = 1e-12;

/// `(∂D/∂z, ∂D/∂z̄)` for `D(z) = (1 − |z|²)|f′(z)|`.
pub fn density_derivatives_disk(f: &HoloMap, z: Complex64) -> Result<(Complex64, Complex64)> {
    let (_, d1, d2) = f.derivatives_1d(z)?;
    let modulus = d1.norm();
    if modulus < CRITICAL_THRESHOLD {
        return Err(Error::Degenerate(format!("critical point of f at {z}")));
    }
    let w = 1.0 - z.norm_sqr();
    let dz = -z.conj() * modulus + d2 * d1.conj() * (w / (2.0 * modulus));
    let dzbar = -z * modulus + d2.conj() * d1 * (w / (2.0 * modulus));
    Ok((dz, dzbar))
}

/// `3√3 z²/4`, the map for which the `f″` estimate is an equality at the origin.
pub fn disk_extremal() -> HoloMap {
    let zero = Complex64::new(0.0, 0.0);
    HoloMap::Polynomial(PolynomialMap::univariate(&[
        zero,
        zero,
        Complex64::new(0.75 * 3f64.sqrt(), 0.0),
    ]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Options {
    /// Approximate number of polar grid points per map.
    pub grid: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub prenorm_budget: PrenormBudget,
    /// Tolerance for the equality case at the origin.
    pub extremal_tolerance: f64,
    /// Grid points per map on which the analytic gradient is compared to finite differences.
    pub fd_points: usize,
    pub collect_rows: bool,
}

impl Default for Theorem2Options {
    fn default() -> Self {
        Self {
            grid: 2500,
            seed: 0,
            tolerances: Tolerances::default(),
            prenorm_budget: PrenormBudget::default(),
            extremal_tolerance: 1e-12,
            fd_points: 32,
            collect_rows: false,
        }
    }
}

/// Polar grid of about `count` points in the disk of radius `0.999`, with an
/// angular offset drawn from `seed`.
pub fn polar_grid(count: usize, seed: u64) -> Vec<Complex64> {
    let radii = (count as f64).sqrt().ceil().max(1.0) as usize;
    let angles = count.div_ceil(radii).max(1);
    let offset = stream(seed, 0x4752_4944).gen::<f64>();
    let mut out = vec![Complex64::new(0.0, 0.0)];
    for i in 0..radii {
        let r = 0.999 * (i as f64 + 0.5) / radii as f64;
        for j in 0..angles {
            out.push(Complex64::from_polar(
                r,
                TAU * (j as f64 + offset) / angles as f64,
            ));
        }
    }
    out
}

fn fd_gradient(f: &HoloMap, z: Complex64, p: &BlochParams) -> Result<Complex64> {
    let h = 1e-6;
    let d = |w: Complex64| -> Result<f64> { density(f, &BallPoint::new(vec![w])?, p) };
    let dx = (d(z + h)? - d(z - h)?) / (2.0 * h);
    let dy = (d(z + Complex64::new(0.0, h))? - d(z - Complex64::new(0.0, h))?) / (2.0 * h);
    Ok(Complex64::new(dx, -dy) / 2.0)
}

struct MapOutcome {
    gradient: Tally,
    second: Tally,
    critical: usize,
    fd_deviation: f64,
}

fn check_one(
    f: &HoloMap,
    index: usize,
    grid: &[Complex64],
    opts: &Theorem2Options,
    p: &BlochParams,
) -> Result<MapOutcome> {
    let est = prenorm(
        f,
        p,
        &opts.prenorm_budget,
        opts.seed.wrapping_add(index as u64),
    )?;
    if (est.value - 1.0).abs() > opts.tolerances.sup_relative {
        return Err(Error::NotNormalized {
            index,
            estimate: est.value,
        });
    }
    let mut max_density = est.value;
    for &z in grid {
        max_density = max_density.max(density(f, &BallPoint::new(vec![z])?, p)?);
    }
    let p_eff = max_density.max(1.0);
    let scale = p_eff * (1.0 + opts.tolerances.assertion + opts.tolerances.sup_relative);
    let big_m = constant_m(1);

    let mut gradient = Tally::upper("gradient", opts.collect_rows);
    let mut second = Tally::upper("second_derivative", opts.collect_rows);
    let mut critical = 0;
    let mut fd_deviation = 0.0f64;
    for (gi, &z) in grid.iter().enumerate() {
        let inputs = SampleInputs {
            map_index: Some(index),
            points: vec![point_repr(&[z])],
            scalars: Vec::new(),
        };
        let w = 1.0 - z.norm_sqr();
        let (_, _, d2) = f.derivatives_1d(z)?;
        let bound2 = (2.0 * z.norm() + big_m) * scale / (w * w);
        second.record(inputs.clone(), d2.norm(), bound2, d2.norm() / bound2);
        match density_derivatives_disk(f, z) {
            Ok((dz, dzbar)) => {
                let lhs = w * (dz.norm() + dzbar.norm());
                let bound = big_m * scale;
                gradient.record(inputs, lhs, bound, lhs / bound);
                if gi < opts.fd_points && z.norm() < 0.99 {
                    let fd = fd_gradient(f, z, p)?;
                    fd_deviation = fd_deviation.max((fd - dz).norm() / dz.norm().max(1.0));
                }
            }
            Err(Error::Degenerate(_)) => critical += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(MapOutcome {
        gradient,
        second,
        critical,
        fd_deviation,
    })
}

/// Checks both disk estimates on a polar grid for every map of a normalized
/// battery, plus the equality of the `f″` estimate for [`disk_extremal`] at 0.
pub fn check_theorem2(battery: &[HoloMap], opts: &Theorem2Options) -> Result<VerificationReport> {
    let started = Instant::now();
    if battery.is_empty() {
        return Err(Error::param("battery", "no maps"));
    }
    if opts.grid == 0 {
        return Err(Error::param("grid", "must be positive"));
    }
    for f in battery {
        if f.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: f.dim(),
            });
        }
    }
    let p = BlochParams::unweighted(1)?;
    let grid = polar_grid(opts.grid, opts.seed);
    let outcomes: Vec<MapOutcome> = battery
        .par_iter()
        .enumerate()
        .map(|(i, f)| check_one(f, i, &grid, opts, &p))
        .collect::<Result<_>>()?;

    let mut report = VerificationReport::new(
        "thm2",
        ReportParams {
            n: 1,
            alpha: 1.0,
            samples: grid.len(),
            seed: opts.seed,
            tolerances: opts.tolerances.clone(),
        },
    );
    let mut gradient = Tally::upper("gradient", opts.collect_rows);
    let mut second = Tally::upper("second_derivative", opts.collect_rows);
    let mut critical = 0;
    let mut fd = 0.0f64;
    for o in outcomes {
        gradient.merge(o.gradient);
        second.merge(o.second);
        critical += o.critical;
        fd = fd.max(o.fd_deviation);
    }

    let ext = disk_extremal();
    let est = prenorm(&ext, &p, &opts.prenorm_budget, opts.seed)?;
    let (_, _, d2) = ext.derivatives_1d(Complex64::new(0.0, 0.0))?;
    let gap = constant_m(1) * est.value - d2.norm();
    let mut equality = Tally::upper("extremal_equality", opts.collect_rows);
    equality.record(
        SampleInputs {
            map_index: None,
            points: vec![point_repr(&[Complex64::new(0.0, 0.0)])],
            scalars: vec![est.value],
        },
        gap.abs(),
        opts.extremal_tolerance,
        gap.abs(),
    );

    report
        .details
        .insert("critical_points_skipped".into(), critical as f64);
    report.details.insert("fd_gradient_deviation".into(), fd);
    report.details.insert("extremal_gap".into(), gap);
    report.details.insert("extremal_prenorm".into(), est.value);
    gradient.into_report(&mut report);
    second.into_report(&mut report);
    equality.into_report(&mut report);
    Ok(report.finalize(started))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{normalize, random_normalized_polynomials};

    #[test]
    fn extremal_has_equality_at_origin() {
        let f = disk_extremal();
        let (_, d1, d2) = f.derivatives_1d(Complex64::new(0.5, 0.0)).unwrap();
        assert!((d1.re - 1.5 * 3f64.sqrt() * 0.5).abs() < 1e-15);
        assert!((d2.re - constant_m(1)).abs() < 1e-15);
        let p = BlochParams::unweighted(1).unwrap();
        let est = prenorm(&f, &p, &PrenormBudget::default(), 0).unwrap();
        assert!((est.value - 1.0).abs() < 1e-13);
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let p = BlochParams::unweighted(1).unwrap();
        let f = HoloMap::Polynomial(PolynomialMap::univariate(&[
            Complex64::new(0.0, 0.0),
            Complex64::new(0.4, 0.1),
            Complex64::new(-0.2, 0.3),
            Complex64::new(0.1, -0.05),
        ]));
        for z in [
            Complex64::new(0.3, -0.2),
            Complex64::new(-0.6, 0.1),
            Complex64::new(0.0, 0.7),
        ] {
            let (dz, dzbar) = density_derivatives_disk(&f, z).unwrap();
            let fd = fd_gradient(&f, z, &p).unwrap();
            assert!((dz - fd).norm() < 1e-8, "{dz} vs {fd}");
            assert!((dzbar - dz.conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn critical_point_is_signalled() {
        let f = disk_extremal();
        assert!(matches!(
            density_derivatives_disk(&f, Complex64::new(0.0, 0.0)),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn grid_covers_the_disk() {
        let g = polar_grid(100, 1);
        assert_eq!(g.len(), 101);
        assert!(g.iter().all(|z| z.norm() < 0.999));
        assert_eq!(polar_grid(100, 1), g);
    }

    #[test]
    fn small_battery_passes() {
        let budget = PrenormBudget {
            samples: 512,
            ..Default::default()
        };
        let mut battery: Vec<HoloMap> = random_normalized_polynomials(1, 3, 4, 11, &budget)
            .unwrap()
            .into_iter()
            .map(|nm| nm.map)
            .collect();
        let p = BlochParams::unweighted(1).unwrap();
        battery.push(
            normalize(&crate::holo::extremal_map(0.3, 1).unwrap(), &p, &budget, 0)
                .unwrap()
                .map,
        );
        let opts = Theorem2Options {
            grid: 400,
            seed: 11,
            prenorm_budget: budget,
            ..Default::default()
        };
        let report = check_theorem2(&battery, &opts).unwrap();
        assert!(report.pass, "{:?}", report.violations.first());
        assert!(report.details["extremal_gap"].abs() < 1e-12);
        assert!(report.details["fd_gradient_deviation"] < 1e-6);
    }
}
