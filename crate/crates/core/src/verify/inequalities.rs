//! Scalar inequalities the Lipschitz and distortion arguments rest on, checked on a grid.

use std::time::Instant;

use super::report::{ReportParams, SampleInputs, Tally, Tolerances, VerificationReport};
use crate::bloch::a0;
use crate::error::{Error, Result};

/// `|w|^{1/n} − m^{1/n} + (1−|w|²)^{(n+1)/(2n)} (m−|w|)^{1/n} / (1−m|w|)^{(n+2)/n}`,
/// nonnegative for `0 ≤ |w| ≤ m ≤ a₀(1)`.
pub fn critical_point_margin(m: f64, w: f64, n: usize) -> f64 {
    let nf = n as f64;
    w.powf(1.0 / nf) - m.powf(1.0 / nf)
        + (1.0 - w * w).powf((nf + 1.0) / (2.0 * nf)) * (m - w).max(0.0).powf(1.0 / nf)
            / (1.0 - m * w).powf((nf + 2.0) / nf)
}

/// `(a₀ + m)/(1 + a₀ m) − m`, the room between the zero of the extremal
/// determinant and the radius of validity of the lower bound.
pub fn radius_margin(m: f64, n: usize) -> f64 {
    let a = a0(1.0, n);
    (a + m) / (1.0 + a * m) - m
}

/// Both margins on a `side × side` grid of `(m, |w|)` with `0 < m ≤ a₀(1)`
/// and `0 ≤ |w| ≤ m`. Passes when every margin is at least `−tolerance`.
pub fn check_proof_inequalities(
    n: usize,
    side: usize,
    tolerance: f64,
) -> Result<VerificationReport> {
    let started = Instant::now();
    if n == 0 || side < 2 {
        return Err(Error::param(
            "side",
            "need n ≥ 1 and at least two grid lines",
        ));
    }
    let top = a0(1.0, n);
    let mut first = Tally::lower("critical_point", false);
    let mut second = Tally::lower("radius", false);
    for i in 1..=side {
        let m = top * i as f64 / side as f64;
        second.record(
            SampleInputs {
                scalars: vec![m],
                ..Default::default()
            },
            radius_margin(m, n),
            -tolerance,
            0.0,
        );
        for j in 0..side {
            let w = m * j as f64 / (side - 1) as f64;
            first.record(
                SampleInputs {
                    scalars: vec![m, w],
                    ..Default::default()
                },
                critical_point_margin(m, w, n),
                -tolerance,
                0.0,
            );
        }
    }
    let mut report = VerificationReport::new(
        "inequalities",
        ReportParams {
            n,
            alpha: 1.0,
            samples: side * side,
            seed: 0,
            tolerances: Tolerances {
                sup_relative: 0.0,
                assertion: tolerance,
            },
        },
    );
    first.into_report(&mut report);
    second.into_report(&mut report);
    Ok(report.finalize(started))
}
