//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use bergman_bloch::ball_geometry::{
    bergman_distance, curve_length, geodesic_infimum, mobius_auto, BallPoint, ComplexMatrix,
    CurveFamily, GeodesicArc, GeodesicBudget, QuadratureSpec,
};
use bergman_bloch::bloch::{
    constant_m, lambda_of_m, lemma_c_profile, m_root, prenorm, random_normalized_polynomials,
    BlochParams, LemmaCProfile, PrenormBudget, PRIOR_DISK_CONSTANT,
};
use bergman_bloch::cli::{run, CampaignConfig};
use bergman_bloch::holo::{
    compose, extremal_map, jacobian_deviation, oracle_jacobian, HoloMap, OracleScheme,
    PolynomialMap,
};
use bergman_bloch::sampling::{random_ball_point, stream};
use bergman_bloch::verify::{
    check_proof_inequalities, check_theorem1, check_theorem2, check_theorem3, check_theorem_d,
    hypothesis_scan, k_constant, sharpness_run, HypothesisBudget, Theorem1Options, Theorem2Options,
    Theorem3Options, TheoremDOptions,
};
use clap::Parser;
use num_complex::Complex64;

const METRIC_REL_TOL: f64 = 1e-8;
const METRIC_TIME_LIMIT: Duration = Duration::from_secs(10);
const VARIATIONAL_REL_TOL: f64 = 1e-4;
const VARIATIONAL_TIME_LIMIT: Duration = Duration::from_secs(60);
const SHARPNESS_SLACK: f64 = 1e-9;
const SATURATION_TOL: f64 = 1e-12;
const ROOT_RESIDUAL_TOL: f64 = 1e-13;
const ROUND_TRIP_TOL: f64 = 1e-12;
const EXTREMAL_EQUALITY_TOL: f64 = 1e-12;
const JACOBIAN_REL_TOL: f64 = 1e-10;
const HYPOTHESIS_TOL: f64 = 1e-10;
const SUP_TOL: f64 = 1e-6;
const INEQUALITY_TOL: f64 = 1e-12;
const SEED: u64 = 20_240_601;

type Check = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn battery(n: usize, count: usize, degree: u32, seed: u64) -> Vec<HoloMap> {
    random_normalized_polynomials(n, count, degree, seed, &PrenormBudget::default())
        .expect("battery")
        .into_iter()
        .map(|nm| nm.map)
        .collect()
}

fn c1_metric_consistency() -> Check {
    let started = Instant::now();
    let spec = QuadratureSpec::default();
    let mut worst = 0.0f64;
    for n in 1..=3 {
        let mut rng = stream(SEED, n as u64);
        for _ in 0..100 {
            let z = random_ball_point(&mut rng, n, 0.999);
            let w = random_ball_point(&mut rng, n, 0.999);
            let d = bergman_distance(&z, &w).map_err(|e| e.to_string())?;
            let len = curve_length(&GeodesicArc::new(&z, &w).map_err(|e| e.to_string())?, &spec)
                .map_err(|e| e.to_string())?;
            worst = worst.max((len - d).abs() / d);
        }
    }
    let elapsed = started.elapsed();
    ensure(
        worst <= METRIC_REL_TOL && elapsed < METRIC_TIME_LIMIT,
        format!(
            "max relative deviation {worst:.2e} (tol {METRIC_REL_TOL:e}), {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn c2_variational() -> Check {
    let started = Instant::now();
    let mut rng = stream(SEED, 200);
    let pairs: Vec<_> = (0..20)
        .map(|_| {
            (
                random_ball_point(&mut rng, 2, 0.9),
                random_ball_point(&mut rng, 2, 0.9),
            )
        })
        .collect();
    let mut worst = 0.0f64;
    for (z, w) in &pairs {
        let d = bergman_distance(z, w).map_err(|e| e.to_string())?;
        let res = geodesic_infimum(
            z,
            w,
            CurveFamily::Spline { interior: 8 },
            GeodesicBudget::default(),
        )
        .map_err(|e| e.to_string())?;
        worst = worst.max((res.length - d).abs() / d);
    }
    let elapsed = started.elapsed();
    ensure(
        worst <= VARIATIONAL_REL_TOL && elapsed < VARIATIONAL_TIME_LIMIT,
        format!(
            "max relative gap {worst:.2e} (tol {VARIATIONAL_REL_TOL:e}), {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn c3_theorem1() -> Check {
    let m1 = constant_m(1);
    let closed = 1.5 * 3f64.sqrt();
    if (m1 - closed).abs() > 1e-15 || m1 >= PRIOR_DISK_CONSTANT {
        return Err(format!("M(1) = {m1}"));
    }
    let mut lines = Vec::new();
    let mut ok = true;
    for n in 1..=3 {
        let maps = battery(n, 50, 4, SEED + n as u64);
        let opts = Theorem1Options {
            pairs: 10_000,
            seed: SEED,
            ..Default::default()
        };
        let r = check_theorem1(&maps, n, &opts).map_err(|e| e.to_string())?;
        ok &= r.pass && r.violation_count == 0;
        lines.push(format!(
            "n={n}: max ratio {:.6} vs M {:.6}, {} violations",
            r.statistics.max_ratio,
            constant_m(n),
            r.violation_count
        ));
    }
    ensure(
        ok,
        format!(
            "M(1) = {m1:.7} < {PRIOR_DISK_CONSTANT}; {}",
            lines.join("; ")
        ),
    )
}

fn c4_sharpness() -> Check {
    let mut ok = true;
    let mut worst = f64::INFINITY;
    for n in 1..=3 {
        for eps in [0.5, 0.1, 0.01] {
            let o = sharpness_run(eps, n).map_err(|e| e.to_string())?;
            let margin = o.ratio - (constant_m(n) - eps - SHARPNESS_SLACK);
            worst = worst.min(margin);
            ok &= margin >= 0.0;
        }
    }
    let exact = sharpness_run(0.01, 1).map_err(|e| e.to_string())?;
    let gap = (exact.ratio - (constant_m(1) - 0.01)).abs();
    ok &= gap <= SHARPNESS_SLACK;
    ensure(
        ok,
        format!(
            "min margin {worst:.2e}; n=1 eps=0.01 ratio {:.9} (gap {gap:.1e})",
            exact.ratio
        ),
    )
}

fn c5_theorem_d() -> Check {
    let mut ok = true;
    let mut lines = Vec::new();
    for n in 1..=2 {
        let maps = battery(n, 10, 3, SEED + 50 + n as u64);
        let opts = TheoremDOptions {
            samples: 1000,
            seed: SEED,
            saturation_radii: 10,
            saturation_tolerance: SATURATION_TOL,
            ..Default::default()
        };
        let params = BlochParams::unweighted(n).map_err(|e| e.to_string())?;
        let r = check_theorem_d(&[0.25, 0.5, 0.75, 1.0], params, &maps, &opts)
            .map_err(|e| e.to_string())?;
        ok &= r.pass;
        lines.push(format!(
            "n={n}: saturation gap {:.1e}, lower/upper samples {}/{}, {} violations",
            r.details
                .get("saturation.max_ratio")
                .copied()
                .unwrap_or(f64::NAN),
            r.details.get("lower.samples").copied().unwrap_or(0.0),
            r.details.get("upper.samples").copied().unwrap_or(0.0),
            r.violation_count
        ));
    }
    ensure(ok, lines.join("; "))
}

fn c6_root_finder() -> Check {
    let mut residual = 0.0f64;
    let mut round_trip = 0.0f64;
    for alpha in [1.0, 2.0] {
        for n in 1..=3 {
            let profile =
                LemmaCProfile::new(BlochParams::new(n, alpha).map_err(|e| e.to_string())?);
            for i in 1..=100 {
                let lambda = i as f64 / 100.0;
                let m = m_root(lambda, &profile).map_err(|e| e.to_string())?;
                let v = lemma_c_profile(m, &profile).map_err(|e| e.to_string())?;
                residual = residual.max((v - lambda).abs());
                if alpha == 1.0 {
                    round_trip = round_trip
                        .max((lambda_of_m(m, n).map_err(|e| e.to_string())? - lambda).abs());
                }
            }
        }
    }
    ensure(
        residual <= ROOT_RESIDUAL_TOL && round_trip <= ROUND_TRIP_TOL,
        format!("max residual {residual:.1e}, round trip {round_trip:.1e}"),
    )
}

fn c7_theorem2() -> Check {
    let maps = battery(1, 20, 4, SEED + 70);
    let opts = Theorem2Options {
        grid: 10_000,
        seed: SEED,
        extremal_tolerance: EXTREMAL_EQUALITY_TOL,
        ..Default::default()
    };
    let r = check_theorem2(&maps, &opts).map_err(|e| e.to_string())?;
    let gap = r.details["extremal_gap"];
    ensure(
        r.pass && gap.abs() <= EXTREMAL_EQUALITY_TOL,
        format!(
            "extremal gap {gap:.1e}, grid {} points x 20 maps, {} violations",
            r.params.samples, r.violation_count
        ),
    )
}

fn sample_maps() -> Vec<(&'static str, HoloMap)> {
    let c = Complex64::new;
    let mut rng = stream(SEED, 800);
    let poly2 = HoloMap::Polynomial(PolynomialMap::random(2, 3, &mut rng));
    let poly1 = HoloMap::Polynomial(PolynomialMap::random(1, 4, &mut rng));
    let auto2 = mobius_auto(&BallPoint::new(vec![c(0.3, -0.1), c(0.2, 0.4)]).unwrap());
    let ext = extremal_map(0.3, 2).unwrap();
    let composed = compose(&poly2, &auto2).unwrap();
    let stack = HoloMap::Stack {
        blocks: vec![
            poly1.clone(),
            mobius_auto(&BallPoint::new(vec![c(0.5, 0.2)]).unwrap()),
        ],
    };
    let rotated = HoloMap::Rotation {
        factor: Complex64::from_polar(1.0, 0.7),
        row: 1,
        inner: Box::new(ext.clone()),
    };
    let scaled = HoloMap::Scaled {
        factor: c(0.4, -0.3),
        inner: Box::new(auto2.clone()),
    };
    vec![
        ("poly", poly2),
        ("extremal", ext),
        ("auto", auto2),
        ("compose", composed),
        ("stack", stack),
        ("rotate", rotated),
        ("scale", scaled),
    ]
}

fn c8_jacobian() -> Check {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (name, f) in sample_maps() {
        let mut rng = stream(SEED, 900);
        let mut kind_worst = 0.0f64;
        for _ in 0..100 {
            let z = random_ball_point(&mut rng, f.dim(), 0.95);
            let exact = f.jacobian(&z).map_err(|e| e.to_string())?;
            let oracle: ComplexMatrix = oracle_jacobian(&f, &z, 1e-20, OracleScheme::ComplexStep)
                .map_err(|e| e.to_string())?;
            kind_worst = kind_worst.max(jacobian_deviation(&exact, &oracle));
        }
        parts.push(format!("{name} {kind_worst:.1e}"));
        worst = worst.max(kind_worst);
    }
    ensure(worst <= JACOBIAN_REL_TOL, parts.join(", "))
}

fn c9_theorem3() -> Check {
    let k = k_constant(1, 0.1, 0.5).map_err(|e| e.to_string())?;
    let maps = battery(1, 10, 3, SEED + 90);
    let p = BlochParams::unweighted(1).map_err(|e| e.to_string())?;
    let budget = PrenormBudget::default();
    let mut ok = (k - 0.206_699).abs() < 5e-7;
    let mut parts = vec![format!("k = {k:.6}")];
    for radius in [0.0, 0.3, 0.7] {
        let a =
            BallPoint::new(vec![Complex64::from_polar(radius, 1.1)]).map_err(|e| e.to_string())?;
        let phi = mobius_auto(&a);
        let hyp = hypothesis_scan(&phi, 200, &HypothesisBudget::default(), SEED)
            .map_err(|e| e.to_string())?;
        let tau_dev = hyp
            .witnesses
            .iter()
            .map(|w| (w.tau - 1.0).abs())
            .fold(0.0, f64::max);
        ok &= hyp.r_attained <= HYPOTHESIS_TOL && tau_dev <= HYPOTHESIS_TOL;
        let opts = Theorem3Options {
            wgrid: 200,
            seed: SEED,
            ..Default::default()
        };
        let r = check_theorem3(&phi, 0.1, 0.5, &maps, &opts).map_err(|e| e.to_string())?;
        ok &= r.applicable && r.pass;
        let mut invariance = 0.0f64;
        for (i, f) in maps.iter().enumerate() {
            let pf = prenorm(f, &p, &budget, SEED + i as u64)
                .map_err(|e| e.to_string())?
                .value;
            let g = compose(f, &phi).map_err(|e| e.to_string())?;
            let pg = prenorm(&g, &p, &budget, SEED + i as u64)
                .map_err(|e| e.to_string())?
                .value;
            invariance = invariance.max((pg - pf).abs() / pf);
        }
        ok &= invariance <= 2.0 * SUP_TOL;
        parts.push(format!(
            "|a|={radius}: tanh-beta {:.1e}, tau dev {tau_dev:.1e}, min ratio {:.6}, prenorm drift {invariance:.1e}",
            hyp.r_attained,
            r.details.get("composition.min_margin").map_or(f64::NAN, |m| m + k),
        ));
    }
    ensure(ok, parts.join("; "))
}

fn c10_inequalities() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 1..=3 {
        let r = check_proof_inequalities(n, 100, INEQUALITY_TOL).map_err(|e| e.to_string())?;
        ok &= r.pass;
        parts.push(format!(
            "n={n}: margins {:.1e} / {:.1e}",
            r.details["critical_point.min_margin"] - INEQUALITY_TOL,
            r.details["radius.min_margin"] - INEQUALITY_TOL
        ));
    }
    ensure(ok, parts.join("; "))
}

fn c11_determinism() -> Check {
    let campaigns: [&[&str]; 5] = [
        &[
            "bb",
            "thm1",
            "--n",
            "2",
            "--battery",
            "random:4:deg3",
            "--pairs",
            "2000",
            "--seed",
            "42",
        ],
        &[
            "bb",
            "thmD",
            "--n",
            "1",
            "--battery",
            "random:3:deg3",
            "--samples",
            "300",
            "--seed",
            "7",
        ],
        &[
            "bb",
            "thm2",
            "--battery",
            "random:3:deg4",
            "--grid",
            "900",
            "--seed",
            "3",
        ],
        &["bb", "sharpness", "--n", "3", "--eps", "0.5,0.01"],
        &[
            "bb",
            "geometry",
            "--n",
            "2",
            "--pairs",
            "20",
            "--variational",
            "1",
            "--seed",
            "5",
        ],
    ];
    for argv in campaigns {
        let cfg = CampaignConfig::try_parse_from(argv).map_err(|e| e.to_string())?;
        let a = run(&cfg).map_err(|e| e.to_string())?;
        let b = run(&cfg).map_err(|e| e.to_string())?;
        if a.report.without_runtime() != b.report.without_runtime() {
            return Err(format!("`{}` differs between runs", argv[1]));
        }
    }
    Ok(format!(
        "{} campaigns reproduced identically",
        campaigns.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("metric consistency", c1_metric_consistency),
        ("variational definition", c2_variational),
        ("Lipschitz bound", c3_theorem1),
        ("sharpness", c4_sharpness),
        ("distortion bounds", c5_theorem_d),
        ("profile root", c6_root_finder),
        ("disk estimates", c7_theorem2),
        ("Jacobian exactness", c8_jacobian),
        ("composition operators", c9_theorem3),
        ("scalar inequalities", c10_inequalities),
        ("determinism", c11_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let result = check();
        let secs = started.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {name} [{secs:.1} s]: {detail}",
                i + 1
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL  {name} [{secs:.1} s]: {detail}",
                    i + 1
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
