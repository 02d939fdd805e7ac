use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::args::{CampaignConfig, Command, Common, REPORT_DIR_ENV};
use super::battery::{load_battery, load_symbol};
use crate::ball_geometry::{
    bergman_distance, curve_length, geodesic_infimum, CurveFamily, GeodesicArc, GeodesicBudget,
    QuadratureSpec,
};
use crate::bloch::{a0, constant_m, BlochParams, PrenormBudget, PRIOR_DISK_CONSTANT};
use crate::error::{Error, Result};
use crate::holo::HoloMap;
use crate::sampling::{random_ball_point, stream};
use crate::verify::{
    check_theorem1, check_theorem2, check_theorem3, check_theorem_d, k_constant, point_repr, r_cap,
    sharpness_run, ReportParams, SampleInputs, SampleRow, Statistics, Tally, Theorem1Options,
    Theorem2Options, Theorem3Options, TheoremDOptions, Tolerances, VerificationReport, Violation,
};

/// The JSON document written for every campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliReport {
    pub command: String,
    /// Echo of the parsed configuration.
    pub params: serde_json::Value,
    pub seed: u64,
    pub version: String,
    pub statistics: Statistics,
    pub details: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    pub violations: Vec<Violation>,
    pub violation_count: usize,
    pub applicable: bool,
    pub pass: bool,
    pub runtime_ms: f64,
}

impl CliReport {
    /// Serialized report with the runtime zeroed, for reproducibility checks.
    pub fn without_runtime(&self) -> String {
        let mut copy = self.clone();
        copy.runtime_ms = 0.0;
        serde_json::to_string_pretty(&copy).expect("report serializes")
    }
}

/// Result of one campaign: the report, its per-sample rows and the exit status.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: CliReport,
    pub rows: Vec<SampleRow>,
    pub exit_code: i32,
}

fn tolerances(c: &Common) -> Tolerances {
    Tolerances {
        sup_relative: c.sup_tol,
        assertion: c.assert_tol,
    }
}

fn budget(c: &Common) -> PrenormBudget {
    PrenormBudget {
        samples: c.prenorm_samples,
        ..Default::default()
    }
}

fn params(c: &Common, alpha: f64, samples: usize) -> ReportParams {
    ReportParams {
        n: c.n,
        alpha,
        samples,
        seed: c.seed,
        tolerances: tolerances(c),
    }
}

fn battery_maps(
    source: &str,
    p: &BlochParams,
    c: &Common,
    report_notes: &mut Vec<String>,
) -> Result<Vec<HoloMap>> {
    let loaded = load_battery(source, p, c.seed, &budget(c))?;
    report_notes.push(format!(
        "battery `{source}`: {} maps, normalization factors {:?}",
        loaded.len(),
        loaded.iter().map(|m| m.factor).collect::<Vec<_>>()
    ));
    Ok(loaded.into_iter().map(|m| m.map).collect())
}

fn geometry(
    c: &Common,
    pairs: usize,
    variational: usize,
    quad_tol: f64,
    metric_tol: f64,
    variational_tol: f64,
    collect_rows: bool,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let spec = QuadratureSpec::default().with_tolerance(quad_tol);
    let points: Vec<_> = (0..pairs)
        .map(|i| {
            let mut rng = stream(c.seed, i as u64);
            (
                random_ball_point(&mut rng, c.n, 0.95),
                random_ball_point(&mut rng, c.n, 0.95),
            )
        })
        .collect();
    let metric: Vec<(SampleInputs, f64, f64)> = points
        .par_iter()
        .map(|(z, w)| -> Result<(SampleInputs, f64, f64)> {
            let d = bergman_distance(z, w)?;
            let len = curve_length(&GeodesicArc::new(z, w)?, &spec)?;
            let inputs = SampleInputs {
                map_index: None,
                points: vec![point_repr(z.coords()), point_repr(w.coords())],
                scalars: vec![d],
            };
            Ok((inputs, len, d))
        })
        .collect::<Result<_>>()?;
    let mut t = Tally::upper("metric", collect_rows);
    for (inputs, len, d) in metric {
        let rel = if d > 0.0 {
            (len - d).abs() / d
        } else {
            len.abs()
        };
        t.record(inputs, rel, metric_tol, rel);
    }
    let mut v = Tally::upper("variational", collect_rows);
    let var: Vec<(SampleInputs, f64)> = points
        .par_iter()
        .take(variational)
        .map(|(z, w)| -> Result<(SampleInputs, f64)> {
            let d = bergman_distance(z, w)?;
            let res = geodesic_infimum(z, w, CurveFamily::default(), GeodesicBudget::default())?;
            let rel = if d > 0.0 {
                (res.length - d) / d
            } else {
                res.length
            };
            Ok((
                SampleInputs {
                    map_index: None,
                    points: vec![point_repr(z.coords()), point_repr(w.coords())],
                    scalars: vec![d, res.length],
                },
                rel,
            ))
        })
        .collect::<Result<_>>()?;
    for (inputs, rel) in var {
        v.record(inputs, rel.abs(), variational_tol, rel);
    }
    let mut report = VerificationReport::new("geometry", params(c, 1.0, pairs));
    t.into_report(&mut report);
    if variational > 0 {
        v.into_report(&mut report);
    }
    Ok(report.finalize(started))
}

fn sharpness(c: &Common, eps: &[f64], collect_rows: bool) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut report = VerificationReport::new("sharpness", params(c, 1.0, eps.len()));
    let mut t = Tally::lower("sharpness", collect_rows);
    for &e in eps {
        let o = sharpness_run(e, c.n)?;
        report.details.insert(format!("eps={e}.m"), o.m);
        report.details.insert(format!("eps={e}.lambda"), o.lambda);
        report.details.insert(format!("eps={e}.ratio"), o.ratio);
        t.record(
            SampleInputs {
                map_index: None,
                points: Vec::new(),
                scalars: vec![e, o.m],
            },
            o.ratio,
            o.target - 1e-9,
            o.ratio,
        );
    }
    report.details.insert("constant".into(), constant_m(c.n));
    t.into_report(&mut report);
    Ok(report.finalize(started))
}

fn constants(c: &Common, alpha: f64) -> Result<VerificationReport> {
    let started = Instant::now();
    BlochParams::new(c.n, alpha)?;
    let mut report = VerificationReport::new("constants", params(c, alpha, 0));
    report.details.insert("M".into(), constant_m(c.n));
    report.details.insert("a0_alpha".into(), a0(alpha, c.n));
    report.details.insert("a0_unweighted".into(), a0(1.0, c.n));
    report
        .details
        .insert("prior_disk_constant".into(), PRIOR_DISK_CONSTANT);
    report.details.insert("r_cap".into(), r_cap(c.n));
    if let Ok(k) = k_constant(c.n, 0.1, 0.5) {
        report.details.insert("k(r=0.1,eps=0.5)".into(), k);
    }
    Ok(report.finalize(started))
}

/// Executes the campaign described by `cfg`. Only usage and domain errors are `Err`.
pub fn run(cfg: &CampaignConfig) -> Result<Outcome> {
    cfg.validate()?;
    let common = cfg.command.common();
    let collect_rows = cfg.command.output().csv.is_some();
    let mut notes = Vec::new();
    let report = match &cfg.command {
        Command::Geometry {
            pairs,
            variational,
            quad_tol,
            metric_tol,
            variational_tol,
            ..
        } => geometry(
            common,
            *pairs,
            *variational,
            *quad_tol,
            *metric_tol,
            *variational_tol,
            collect_rows,
        )?,
        Command::Thm1 { battery, pairs, .. } => {
            let p = BlochParams::unweighted(common.n)?;
            let maps = battery_maps(battery, &p, common, &mut notes)?;
            let opts = Theorem1Options {
                pairs: *pairs,
                seed: common.seed,
                tolerances: tolerances(common),
                prenorm_budget: budget(common),
                collect_rows,
                ..Default::default()
            };
            check_theorem1(&maps, common.n, &opts)?
        }
        Command::Sharpness { eps, .. } => sharpness(common, eps, collect_rows)?,
        Command::Thm2 { battery, grid, .. } => {
            let p = BlochParams::unweighted(1)?;
            let maps = battery_maps(battery, &p, common, &mut notes)?;
            let opts = Theorem2Options {
                grid: *grid,
                seed: common.seed,
                tolerances: tolerances(common),
                prenorm_budget: budget(common),
                collect_rows,
                ..Default::default()
            };
            check_theorem2(&maps, &opts)?
        }
        Command::ThmD {
            alpha,
            lambdas,
            battery,
            samples,
            ..
        } => {
            let p = BlochParams::new(common.n, *alpha)?;
            let maps = match battery {
                Some(b) => battery_maps(b, &p, common, &mut notes)?,
                None => Vec::new(),
            };
            let opts = TheoremDOptions {
                samples: *samples,
                seed: common.seed,
                tolerances: tolerances(common),
                prenorm_budget: budget(common),
                collect_rows,
                ..Default::default()
            };
            check_theorem_d(lambdas, p, &maps, &opts)?
        }
        Command::Thm3 {
            phi,
            r,
            eps,
            battery,
            wgrid,
            ..
        } => {
            let symbol = load_symbol(phi)?;
            if symbol.dim() != common.n {
                return Err(Error::DimensionMismatch {
                    expected: common.n,
                    got: symbol.dim(),
                });
            }
            let p = BlochParams::unweighted(common.n)?;
            let maps = battery_maps(battery, &p, common, &mut notes)?;
            let opts = Theorem3Options {
                wgrid: *wgrid,
                seed: common.seed,
                tolerances: tolerances(common),
                prenorm_budget: budget(common),
                collect_rows,
                ..Default::default()
            };
            check_theorem3(&symbol, *r, *eps, &maps, &opts)?
        }
        Command::Constants { alpha, .. } => constants(common, *alpha)?,
    };
    let exit_code = if report.pass {
        0
    } else if !report.applicable {
        3
    } else {
        2
    };
    let mut all_notes = notes;
    all_notes.extend(report.notes);
    Ok(Outcome {
        report: CliReport {
            command: cfg.command.name().to_string(),
            params: serde_json::to_value(&cfg.command).expect("config serializes"),
            seed: common.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            statistics: report.statistics,
            details: report.details,
            notes: all_notes,
            violations: report.violations,
            violation_count: report.violation_count,
            applicable: report.applicable,
            pass: report.pass,
            runtime_ms: report.runtime_ms,
        },
        rows: report.rows,
        exit_code,
    })
}

#[derive(Serialize)]
struct CsvRow<'a> {
    check: &'a str,
    map_index: Option<usize>,
    points: String,
    scalars: String,
    computed: f64,
    bound: f64,
    margin: f64,
}

/// Writes the CSV of per-sample rows; points and scalars are JSON-encoded cells.
pub fn write_csv(path: &std::path::Path, rows: &[SampleRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
    for r in rows {
        w.serialize(CsvRow {
            check: &r.check,
            map_index: r.inputs.map_index,
            points: serde_json::to_string(&r.inputs.points).expect("points serialize"),
            scalars: serde_json::to_string(&r.inputs.scalars).expect("scalars serialize"),
            computed: r.computed,
            bound: r.bound,
            margin: r.margin,
        })
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// `--out`, else `<command>.json` in `$BERGMAN_BLOCH_REPORT_DIR`, else in the working directory.
pub fn report_path(cfg: &CampaignConfig) -> PathBuf {
    cfg.command.output().out.clone().unwrap_or_else(|| {
        let dir = std::env::var_os(REPORT_DIR_ENV).map_or_else(PathBuf::new, PathBuf::from);
        dir.join(format!("{}.json", cfg.command.name()))
    })
}

fn summary(report: &CliReport) -> String {
    let status = if report.pass {
        "pass"
    } else if !report.applicable {
        "inapplicable"
    } else {
        "FAIL"
    };
    let mut out = format!("{}: {status}\n", report.command);
    let s = &report.statistics;
    if s.max_ratio.is_finite() {
        out.push_str(&format!(
            "  max_ratio  {:.10}\n  bound      {:.10}\n  margin     {:.3e}\n",
            s.max_ratio, s.bound, s.margin
        ));
    }
    for (k, v) in &report.details {
        out.push_str(&format!("  {k:<28} {v:.10}\n"));
    }
    if report.violation_count > 0 {
        out.push_str(&format!("  violations {}\n", report.violation_count));
    }
    for n in &report.notes {
        out.push_str(&format!("  note: {n}\n"));
    }
    out
}

/// Parses `args`, runs the campaign, writes the requested files and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match CampaignConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let json = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
    let path = report_path(&cfg);
    let written = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map_or(Ok(()), std::fs::create_dir_all)
        .and_then(|_| std::fs::write(&path, &json));
    if let Err(e) = written {
        eprintln!("error: cannot write {}: {e}", path.display());
        return 1;
    }
    if let Some(path) = &cfg.command.output().csv {
        if let Err(e) = write_csv(path, &outcome.rows) {
            eprintln!("error: {e}");
            return 1;
        }
    }
    if cfg.command.output().json {
        println!("{json}");
    } else {
        print!("{}", summary(&outcome.report));
    }
    outcome.exit_code
}
