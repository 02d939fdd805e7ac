use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ball_geometry::BallPoint;

/// Violations kept verbatim in a report; the total is always counted.
pub const MAX_STORED_VIOLATIONS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative slack granted for the below-certified prenorm.
    pub sup_relative: f64,
    /// Tolerance on the asserted inequality itself.
    pub assertion: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            sup_relative: 1e-6,
            assertion: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub n: usize,
    pub alpha: f64,
    pub samples: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
}

/// A point serialized as `[[re, im], …]`.
pub type PointRepr = Vec<[f64; 2]>;

pub fn point_repr(z: &[Complex64]) -> PointRepr {
    z.iter().map(|c| [c.re, c.im]).collect()
}

pub fn point_from_repr(p: &PointRepr) -> crate::Result<BallPoint> {
    BallPoint::new(p.iter().map(|c| Complex64::new(c[0], c[1])).collect())
}

/// Inputs of one evaluated sample: the map it concerns (by battery index)
/// and the points and scalar parameters it was evaluated at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SampleInputs {
    pub map_index: Option<usize>,
    pub points: Vec<PointRepr>,
    pub scalars: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub inputs: SampleInputs,
    pub computed: f64,
    pub bound: f64,
    /// How far the computed value lies on the wrong side of the bound.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Statistics {
    /// Largest value of the checked statistic (the Lipschitz ratio for
    /// the Lipschitz check, `computed/bound` for multi-inequality checks).
    #[serde(deserialize_with = "nan_from_null")]
    pub max_ratio: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub bound: f64,
    /// Smallest `bound − computed` over all samples, sign-adjusted so that
    /// negative means violated.
    #[serde(deserialize_with = "nan_from_null")]
    pub margin: f64,
    pub witness: SampleInputs,
}

/// Non-finite floats serialize as `null`; read them back as NaN.
fn nan_from_null<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

impl Default for Statistics {
    fn default() -> Self {
        Self {
            max_ratio: f64::NEG_INFINITY,
            bound: f64::NAN,
            margin: f64::INFINITY,
            witness: SampleInputs::default(),
        }
    }
}

/// One per-sample row for CSV export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub check: String,
    pub inputs: SampleInputs,
    pub computed: f64,
    pub bound: f64,
    pub margin: f64,
}

/// Outcome of one theorem-checking campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub params: ReportParams,
    pub statistics: Statistics,
    /// Named auxiliary numbers (constants, attained hypothesis values, …).
    pub details: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    pub violations: Vec<Violation>,
    pub violation_count: usize,
    /// False when the theorem's hypotheses were not met, so nothing was asserted.
    pub applicable: bool,
    /// `applicable` and no violations.
    pub pass: bool,
    pub runtime_ms: f64,
    #[serde(skip)]
    pub rows: Vec<SampleRow>,
}

impl VerificationReport {
    pub fn new(theorem: &str, params: ReportParams) -> Self {
        Self {
            theorem: theorem.to_string(),
            params,
            statistics: Statistics::default(),
            details: BTreeMap::new(),
            notes: Vec::new(),
            violations: Vec::new(),
            violation_count: 0,
            applicable: true,
            pass: false,
            runtime_ms: 0.0,
            rows: Vec::new(),
        }
    }

    /// Sorts violations canonically, truncates the stored list and sets `pass`.
    pub fn finalize(mut self, started: std::time::Instant) -> Self {
        self.violation_count = self.violation_count.max(self.violations.len());
        self.violations.sort_by(|a, b| {
            a.check
                .cmp(&b.check)
                .then(a.inputs.map_index.cmp(&b.inputs.map_index))
                .then(b.excess.total_cmp(&a.excess))
                .then_with(|| format!("{:?}", a.inputs).cmp(&format!("{:?}", b.inputs)))
        });
        self.violations.truncate(MAX_STORED_VIOLATIONS);
        self.pass = self.applicable && self.violation_count == 0;
        self.runtime_ms = started.elapsed().as_secs_f64() * 1e3;
        self
    }

    /// The report without the runtime field, for reproducibility comparisons.
    pub fn statistics_fingerprint(&self) -> String {
        let mut copy = self.clone();
        copy.runtime_ms = 0.0;
        serde_json::to_string(&copy).expect("report serializes")
    }
}

/// Running aggregate of one inequality `computed ≤ bound` (or `≥` when `lower`).
#[derive(Debug, Clone)]
pub struct Tally {
    pub check: String,
    pub lower: bool,
    pub stats: Statistics,
    pub violations: Vec<Violation>,
    pub violation_count: usize,
    pub rows: Vec<SampleRow>,
    pub collect_rows: bool,
    pub samples: usize,
}

impl Tally {
    pub fn upper(check: &str, collect_rows: bool) -> Self {
        Self::make(check, false, collect_rows)
    }

    pub fn lower(check: &str, collect_rows: bool) -> Self {
        Self::make(check, true, collect_rows)
    }

    fn make(check: &str, lower: bool, collect_rows: bool) -> Self {
        Self {
            check: check.to_string(),
            lower,
            stats: Statistics::default(),
            violations: Vec::new(),
            violation_count: 0,
            rows: Vec::new(),
            collect_rows,
            samples: 0,
        }
    }

    /// Records one sample; `ratio` is the statistic tracked as `max_ratio`.
    pub fn record(&mut self, inputs: SampleInputs, computed: f64, bound: f64, ratio: f64) {
        self.samples += 1;
        let margin = if self.lower {
            computed - bound
        } else {
            bound - computed
        };
        if ratio > self.stats.max_ratio || (self.stats.max_ratio.is_infinite() && ratio.is_nan()) {
            self.stats.max_ratio = ratio;
        }
        if margin < self.stats.margin || !margin.is_finite() && self.stats.margin.is_infinite() {
            self.stats.margin = margin;
            self.stats.bound = bound;
            self.stats.witness = inputs.clone();
        }
        if !(margin >= 0.0) {
            self.violation_count += 1;
            if self.violations.len() < MAX_STORED_VIOLATIONS {
                self.violations.push(Violation {
                    check: self.check.clone(),
                    inputs: inputs.clone(),
                    computed,
                    bound,
                    excess: -margin,
                });
            }
        }
        if self.collect_rows {
            self.rows.push(SampleRow {
                check: self.check.clone(),
                inputs,
                computed,
                bound,
                margin,
            });
        }
    }

    /// Merges `other` into `self`, keeping the worst margin and largest ratio.
    pub fn merge(&mut self, other: Tally) {
        self.samples += other.samples;
        if other.stats.max_ratio > self.stats.max_ratio {
            self.stats.max_ratio = other.stats.max_ratio;
        }
        if other.stats.margin < self.stats.margin {
            self.stats.margin = other.stats.margin;
            self.stats.bound = other.stats.bound;
            self.stats.witness = other.stats.witness;
        }
        self.violation_count += other.violation_count;
        self.violations.extend(other.violations);
        self.rows.extend(other.rows);
    }

    /// Folds this tally into a report: violations, rows, and the overall statistics
    /// when this tally has the worst margin so far.
    pub fn into_report(self, report: &mut VerificationReport) {
        report
            .details
            .insert(format!("{}.samples", self.check), self.samples as f64);
        if self.samples > 0 {
            report
                .details
                .insert(format!("{}.min_margin", self.check), self.stats.margin);
            report
                .details
                .insert(format!("{}.max_ratio", self.check), self.stats.max_ratio);
        }
        if self.samples > 0
            && (report.statistics.margin.is_infinite()
                || self.stats.margin < report.statistics.margin)
        {
            let max_ratio = report.statistics.max_ratio.max(self.stats.max_ratio);
            report.statistics = self.stats;
            report.statistics.max_ratio = max_ratio;
        } else if self.stats.max_ratio > report.statistics.max_ratio {
            report.statistics.max_ratio = self.stats.max_ratio;
        }
        report.violation_count += self.violation_count;
        report.violations.extend(self.violations);
        report.rows.extend(self.rows);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_tracks_worst_margin_and_violations() {
        let mut t = Tally::upper("x", true);
        t.record(SampleInputs::default(), 1.0, 2.0, 0.5);
        t.record(
            SampleInputs {
                map_index: Some(3),
                ..Default::default()
            },
            2.5,
            2.0,
            1.25,
        );
        assert_eq!(t.violation_count, 1);
        assert_eq!(t.stats.max_ratio, 1.25);
        assert_eq!(t.stats.margin, -0.5);
        assert_eq!(t.violations[0].excess, 0.5);
        assert_eq!(t.rows.len(), 2);

        let mut lo = Tally::lower("y", false);
        lo.record(SampleInputs::default(), 3.0, 1.0, 0.0);
        assert_eq!(lo.stats.margin, 2.0);
        assert!(lo.violations.is_empty());
    }

    #[test]
    fn pass_requires_applicability() {
        let params = ReportParams {
            n: 1,
            alpha: 1.0,
            samples: 0,
            seed: 0,
            tolerances: Tolerances::default(),
        };
        let r = VerificationReport::new("t", params.clone()).finalize(std::time::Instant::now());
        assert!(r.pass);
        let mut r = VerificationReport::new("t", params);
        r.applicable = false;
        assert!(!r.finalize(std::time::Instant::now()).pass);
    }
}
