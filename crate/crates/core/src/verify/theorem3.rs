//! Lower bounds for composition operators `C_φ f = f ∘ φ` whose symbol comes
//! pseudo-hyperbolically close to every point while keeping its density
//! ratio away from zero.

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{
    point_repr, ReportParams, SampleInputs, Tally, Tolerances, VerificationReport,
};
use crate::ball_geometry::{norm_sqr, pseudo_hyperbolic, BallPoint, BALL_LIMIT};
use crate::bloch::{constant_m, prenorm, BlochParams, PrenormBudget};
use crate::error::{Error, Result};
use crate::holo::{check_self_map, compose, HoloMap};
use crate::optim::{minimize, SimplexOptions};
use crate::sampling::ball_points;

/// Largest admissible `r`: `(1/M(n)) ((n+2)/(n+1))^{1/n}`.
pub fn r_cap(n: usize) -> f64 {
    let nf = n as f64;
    ((nf + 2.0) / (nf + 1.0)).powf(1.0 / nf) / constant_m(n)
}

/// `k(n, r, ε) = [1 − r M(n) ((n+1)/(n+2))^{1/n}] ε/2`, for `0 < r < r_cap(n)`.
pub fn k_constant(n: usize, r: f64, eps: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n", "dimension must be at least 1"));
    }
    let cap = r_cap(n);
    if !(r > 0.0 && r < cap) {
        return Err(Error::param("r", format!("{r} outside (0, {cap})")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::param("eps", format!("must be positive, got {eps}")));
    }
    let nf = n as f64;
    Ok((1.0 - r * constant_m(n) * ((nf + 1.0) / (nf + 2.0)).powf(1.0 / nf)) * eps / 2.0)
}

/// `τ_φ(z) = ((1−|z|²)/(1−|φ(z)|²))^{(n+1)/(2n)} |det φ′(z)|^{1/n}`.
pub fn tau(phi: &HoloMap, z: &BallPoint) -> Result<f64> {
    let n = phi.dim() as f64;
    let image = phi.eval(z)?;
    let w = 1.0 - norm_sqr(&image);
    if !(w > 0.0) {
        return Err(Error::OutOfDomain {
            norm: (1.0 - w).sqrt(),
            limit: BALL_LIMIT,
        });
    }
    let det = phi.jacobian_det(z)?;
    Ok((z.weight() / w).powf((n + 1.0) / (2.0 * n)) * det.norm().powf(1.0 / n))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypothesisBudget {
    pub max_iters: u64,
    pub tolerance: f64,
}

impl Default for HypothesisBudget {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            tolerance: 1e-15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisWitness {
    pub w: BallPoint,
    pub z: BallPoint,
    /// `ρ(φ(z), w)^{1/n}`.
    pub t: f64,
    pub tau: f64,
    /// The local search ran out of iterations before reaching `w`.
    pub exhausted: bool,
}

/// Empirical hypothesis values over a grid of targets `w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem3Hypothesis {
    pub n: usize,
    /// `max_w min_z ρ(φ(z), w)^{1/n}`.
    pub r_attained: f64,
    /// `min_w τ_φ(z_w)` at the minimizers `z_w`.
    pub eps_attained: f64,
    pub r_cap: f64,
    pub exhausted: usize,
    pub worst_r: HypothesisWitness,
    pub worst_eps: HypothesisWitness,
    pub witnesses: Vec<HypothesisWitness>,
}

impl Theorem3Hypothesis {
    /// Whether `(r, ε)` is certified on the grid.
    pub fn satisfies(&self, r: f64, eps: f64) -> bool {
        r < self.r_cap && self.r_attained < r && self.eps_attained > eps && self.exhausted == 0
    }

    /// Whether the attained `r` lies below the cap.
    pub fn within_cap(&self) -> bool {
        self.r_attained < self.r_cap
    }
}

fn nearest_preimage(
    phi: &HoloMap,
    w: &BallPoint,
    budget: &HypothesisBudget,
) -> Result<HypothesisWitness> {
    let n = phi.dim();
    let gap = |z: &BallPoint| -> Result<f64> {
        let image = BallPoint::new(phi.eval(z)?)?;
        pseudo_hyperbolic(&image, w)
    };
    let mut starts = vec![w.clone()];
    if let Some(h) = phi.inverse_hint(w.coords()) {
        if let Ok(z) = BallPoint::new(h) {
            starts.insert(0, z);
        }
    }
    let mut best: Option<(f64, BallPoint, bool)> = None;
    for start in starts {
        let g = gap(&start).unwrap_or(1.0);
        if g <= 1e-13 {
            best = Some((g, start, false));
            break;
        }
        let objective = |x: &[f64]| -> f64 {
            match BallPoint::from_interleaved(x) {
                Ok(z) => gap(&z).unwrap_or(1.0),
                Err(_) => 1.0 + x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            }
        };
        let local = minimize(
            &objective,
            &start.to_interleaved(),
            SimplexOptions {
                step: (0.5 * (1.0 - start.norm())).min(0.05),
                tolerance: budget.tolerance,
                max_iters: budget.max_iters,
            },
        );
        let candidate = BallPoint::from_interleaved(&local.x).unwrap_or(start.clone());
        let value = gap(&candidate).unwrap_or(1.0);
        let exhausted = !local.converged && value > 1e-10;
        if best.as_ref().map_or(true, |b| value < b.0) {
            best = Some((value, candidate, exhausted));
        }
    }
    let (rho, z, exhausted) = best.expect("at least one start");
    Ok(HypothesisWitness {
        w: w.clone(),
        tau: tau(phi, &z)?,
        z,
        t: rho.powf(1.0 / n as f64),
        exhausted,
    })
}

/// For each grid target `w`, minimizes `ρ(φ(z), w)` from `w` and from the
/// symbol's cheap inverse when it has one, and records the attained
/// `ρ^{1/n}` and `τ_φ` at the minimizer.
pub fn hypothesis_scan(
    phi: &HoloMap,
    wgrid: usize,
    budget: &HypothesisBudget,
    seed: u64,
) -> Result<Theorem3Hypothesis> {
    if wgrid == 0 {
        return Err(Error::param("wgrid", "must be positive"));
    }
    check_self_map(phi)?;
    let n = phi.dim();
    let mut targets = ball_points(n, wgrid, 0.99, seed);
    targets.push(BallPoint::origin(n));
    let witnesses: Vec<HypothesisWitness> = targets
        .par_iter()
        .map(|w| nearest_preimage(phi, w, budget))
        .collect::<Result<_>>()?;
    let worst_r = witnesses
        .iter()
        .max_by(|a, b| a.t.total_cmp(&b.t))
        .expect("non-empty grid")
        .clone();
    let worst_eps = witnesses
        .iter()
        .min_by(|a, b| a.tau.total_cmp(&b.tau))
        .expect("non-empty grid")
        .clone();
    Ok(Theorem3Hypothesis {
        n,
        r_attained: worst_r.t,
        eps_attained: worst_eps.tau,
        r_cap: r_cap(n),
        exhausted: witnesses.iter().filter(|w| w.exhausted).count(),
        worst_r,
        worst_eps,
        witnesses,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem3Options {
    pub wgrid: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub hypothesis_budget: HypothesisBudget,
    pub prenorm_budget: PrenormBudget,
    pub collect_rows: bool,
}

impl Default for Theorem3Options {
    fn default() -> Self {
        Self {
            wgrid: 400,
            seed: 0,
            tolerances: Tolerances::default(),
            hypothesis_budget: HypothesisBudget::default(),
            prenorm_budget: PrenormBudget::default(),
            collect_rows: false,
        }
    }
}

/// Asserts `‖f ∘ φ‖ ≥ k(n, r, ε) ‖f‖` for each battery map once the
/// hypothesis scan certifies `(r, ε)`; otherwise returns an inapplicable report.
pub fn check_theorem3(
    phi: &HoloMap,
    r: f64,
    eps: f64,
    battery: &[HoloMap],
    opts: &Theorem3Options,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let n = phi.dim();
    let k = k_constant(n, r, eps)?;
    for f in battery {
        if f.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: f.dim(),
            });
        }
    }
    let mut report = VerificationReport::new(
        "thm3",
        ReportParams {
            n,
            alpha: 1.0,
            samples: opts.wgrid,
            seed: opts.seed,
            tolerances: opts.tolerances.clone(),
        },
    );
    let hyp = hypothesis_scan(phi, opts.wgrid, &opts.hypothesis_budget, opts.seed)?;
    report.details.insert("k".into(), k);
    report.details.insert("r".into(), r);
    report.details.insert("eps".into(), eps);
    report.details.insert("r_cap".into(), hyp.r_cap);
    report.details.insert("r_attained".into(), hyp.r_attained);
    report
        .details
        .insert("eps_attained".into(), hyp.eps_attained);
    report
        .details
        .insert("search_exhausted".into(), hyp.exhausted as f64);
    if !hyp.satisfies(r, eps) {
        report.applicable = false;
        report.notes.push(format!(
            "hypothesis not met: attained r {} (target {r}, cap {}), attained eps {} (target {eps}), {} exhausted searches",
            hyp.r_attained, hyp.r_cap, hyp.eps_attained, hyp.exhausted
        ));
        report.statistics.witness = SampleInputs {
            map_index: None,
            points: vec![
                point_repr(hyp.worst_r.w.coords()),
                point_repr(hyp.worst_eps.w.coords()),
            ],
            scalars: vec![hyp.worst_r.t, hyp.worst_eps.tau],
        };
        return Ok(report.finalize(started));
    }

    let p = BlochParams::unweighted(n)?;
    let rows: Vec<(f64, f64)> = battery
        .par_iter()
        .enumerate()
        .map(|(i, f)| -> Result<(f64, f64)> {
            let seed = opts.seed.wrapping_add(i as u64);
            let pf = prenorm(f, &p, &opts.prenorm_budget, seed)?.value;
            let g = compose(f, phi)?;
            let pg = prenorm(&g, &p, &opts.prenorm_budget, seed)?.value;
            Ok((pf, pg))
        })
        .collect::<Result<_>>()?;
    let mut tally = Tally::lower("composition", opts.collect_rows);
    for (i, (pf, pg)) in rows.into_iter().enumerate() {
        let bound = k * pf * (1.0 - opts.tolerances.sup_relative) - opts.tolerances.assertion;
        tally.record(
            SampleInputs {
                map_index: Some(i),
                points: Vec::new(),
                scalars: vec![pf],
            },
            pg,
            bound,
            if pf > 0.0 { pg / pf } else { f64::INFINITY },
        );
    }
    tally.into_report(&mut report);
    Ok(report.finalize(started))
}

/// A disk automorphism composed with a rotation, a typical surjective symbol.
pub fn rotated_disk_automorphism(a: Complex64, angle: f64) -> Result<HoloMap> {
    let auto = crate::ball_geometry::mobius_auto(&BallPoint::new(vec![a])?);
    let rot = HoloMap::Polynomial(crate::holo::PolynomialMap::univariate(&[
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(1.0, angle),
    ]));
    compose(&rot, &auto)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball_geometry::mobius_auto;
    use crate::bloch::random_normalized_polynomials;

    #[test]
    fn k_constant_values() {
        let k = k_constant(1, 0.1, 0.5).unwrap();
        assert!((k - 0.206_698_729_810_778_07).abs() < 1e-12, "{k}");
        assert!(k_constant(1, r_cap(1), 0.5).is_err());
        let near = k_constant(1, r_cap(1) * (1.0 - 1e-12), 0.5).unwrap();
        assert!(near.abs() < 1e-11);
        assert!(k_constant(2, 0.0, 0.5).is_err());
        assert!(k_constant(2, 0.1, 0.0).is_err());
    }

    #[test]
    fn automorphism_satisfies_hypothesis() {
        let phi = mobius_auto(&BallPoint::real(&[0.3, -0.2]).unwrap());
        let hyp = hypothesis_scan(&phi, 50, &HypothesisBudget::default(), 1).unwrap();
        assert!(hyp.r_attained < 1e-4, "{}", hyp.r_attained);
        assert!((hyp.eps_attained - 1.0).abs() < 1e-9);
        assert!(hyp.satisfies(0.1, 0.5));
    }

    #[test]
    fn contraction_is_inapplicable() {
        let half = HoloMap::identity(1).scaled(Complex64::new(0.5, 0.0));
        let opts = Theorem3Options {
            wgrid: 40,
            ..Default::default()
        };
        let report = check_theorem3(&half, 0.1, 0.5, &[HoloMap::identity(1)], &opts).unwrap();
        assert!(!report.applicable);
        assert!(!report.pass);
        assert!(report.details["r_attained"] > 0.1);
    }

    #[test]
    fn composition_bound_holds_for_surjective_symbol() {
        let budget = PrenormBudget {
            samples: 512,
            ..Default::default()
        };
        let battery: Vec<HoloMap> = random_normalized_polynomials(1, 3, 3, 2, &budget)
            .unwrap()
            .into_iter()
            .map(|nm| nm.map)
            .collect();
        let phi = rotated_disk_automorphism(Complex64::new(0.2, 0.4), 0.7).unwrap();
        let opts = Theorem3Options {
            wgrid: 60,
            prenorm_budget: budget,
            ..Default::default()
        };
        let report = check_theorem3(&phi, 0.1, 0.5, &battery, &opts).unwrap();
        assert!(report.applicable, "{:?}", report.notes);
        assert!(report.pass, "{:?}", report.violations.first());
        assert!(report.statistics.max_ratio > 0.99);
    }
}
