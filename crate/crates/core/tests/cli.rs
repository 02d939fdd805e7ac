use std::process::Command;

use bergman_bloch::ball_geometry::BallPoint;
use bergman_bloch::bloch::{BlochParams, PrenormBudget};
use bergman_bloch::cli::{load_battery, CliReport};
use bergman_bloch::verify::{lipschitz_ratio, point_from_repr, PointRepr};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bergman-bloch"));
    cmd.env(
        "BERGMAN_BLOCH_REPORT_DIR",
        std::env::temp_dir().join("bergman-bloch-cli-tests"),
    );
    cmd
}

fn stdout_of(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

#[test]
fn constants_prints_the_sharp_constant() {
    let (code, out) = stdout_of(&["constants", "--n", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("2.5980762"), "{out}");
    assert!(out.contains("0.5773502"), "{out}");
    assert!(out.contains("3.31"), "{out}");
}

#[test]
fn sharpness_passes() {
    let (code, out) = stdout_of(&["sharpness", "--n", "1", "--eps", "0.01"]);
    assert_eq!(code, 0);
    assert!(out.contains("sharpness: pass"), "{out}");
    assert!(out.contains("2.588076"), "{out}");
}

#[test]
fn exit_codes() {
    assert_eq!(stdout_of(&["thm1", "--pairs", "0"]).0, 1);
    assert_eq!(stdout_of(&["frobnicate"]).0, 1);
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(
        stdout_of(&["thm1", "--battery", empty.to_str().unwrap()]).0,
        1
    );
    let (code, out) = stdout_of(&[
        "thm3",
        "--phi",
        "scale(factor=[0.5,0]){identity(n=1)}",
        "--battery",
        "random:2:deg2",
        "--wgrid",
        "30",
        "--prenorm-samples",
        "256",
    ]);
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("inapplicable"));
    let (code, _) = stdout_of(&[
        "thm3",
        "--phi",
        "auto(a=[0.3,0.1])",
        "--battery",
        "random:2:deg2",
        "--wgrid",
        "30",
        "--prenorm-samples",
        "256",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn report_defaults_to_the_working_directory() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["constants", "--n", "2"])
        .env_remove("BERGMAN_BLOCH_REPORT_DIR")
        .current_dir(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let report: CliReport =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("constants.json")).unwrap())
            .unwrap();
    assert!(report.pass);
}

#[test]
fn report_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["sharpness", "--n", "2", "--eps", "0.1"])
        .env("BERGMAN_BLOCH_REPORT_DIR", dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let json = std::fs::read_to_string(dir.path().join("sharpness.json")).unwrap();
    let report: CliReport = serde_json::from_str(&json).unwrap();
    assert_eq!(report.command, "sharpness");
    assert!(report.pass);
    assert_eq!(report.version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn reports_are_reproducible_and_csv_rows_replay() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let out = dir.path().join(format!("{tag}.json"));
        let csv = dir.path().join(format!("{tag}.csv"));
        let (code, _) = stdout_of(&[
            "thm1",
            "--n",
            "2",
            "--battery",
            "random:2:deg2",
            "--pairs",
            "200",
            "--seed",
            "42",
            "--prenorm-samples",
            "512",
            "--out",
            out.to_str().unwrap(),
            "--csv",
            csv.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let report: CliReport =
            serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
        (report, std::fs::read_to_string(csv).unwrap())
    };
    let (a, csv_a) = run("thm1");
    let (b, csv_b) = run("thm1");
    assert_eq!(a.without_runtime(), b.without_runtime());
    assert_eq!(csv_a, csv_b);

    let p = BlochParams::unweighted(2).unwrap();
    let budget = PrenormBudget {
        samples: 512,
        ..Default::default()
    };
    let battery: Vec<_> = load_battery("random:2:deg2", &p, 42, &budget)
        .unwrap()
        .into_iter()
        .map(|m| m.map)
        .collect();
    let mut reader = csv::Reader::from_reader(csv_a.as_bytes());
    let mut rows = 0;
    for record in reader.records() {
        let record = record.unwrap();
        let index: usize = record[1].parse().unwrap();
        let points: Vec<PointRepr> = serde_json::from_str(&record[2]).unwrap();
        let computed: f64 = record[4].parse().unwrap();
        let pts: Vec<BallPoint> = points.iter().map(|p| point_from_repr(p).unwrap()).collect();
        let again = lipschitz_ratio(&battery[index], &pts[0], &pts[1], 2).unwrap();
        assert!(
            (again - computed).abs() <= 1e-12 * computed.max(1.0),
            "{again} vs {computed}"
        );
        rows += 1;
    }
    assert!(rows >= 400);
}

#[test]
fn map_file_battery() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("maps.txt");
    std::fs::write(&file, "# disk maps\nextremal(n=1, m=0.2)\nidentity(n=1)\n").unwrap();
    let (code, out) = stdout_of(&[
        "thm2",
        "--battery",
        file.to_str().unwrap(),
        "--grid",
        "400",
        "--prenorm-samples",
        "512",
    ]);
    assert_eq!(code, 0, "{out}");
}
