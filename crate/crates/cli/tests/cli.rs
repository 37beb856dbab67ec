use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn graf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graf"))
        .args(args)
        .env_remove("GRAF_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

fn generate(dir: &Path, name: &str, extra: &[&str]) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let mut args = vec!["generate", "--output", &p];
    args.extend_from_slice(extra);
    let out = graf(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    p
}

fn circle_params(v: &Value) -> [f64; 3] {
    let p = &v["result"]["params"];
    assert_eq!(p["family"], "circle");
    [
        p["a"].as_f64().unwrap(),
        p["b"].as_f64().unwrap(),
        p["r"].as_f64().unwrap(),
    ]
}

#[test]
fn noiseless_circle_is_recovered_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let pts = generate(
        dir.path(),
        "c.csv",
        &["--params", "1.5,-2,3", "--sigma", "0", "-n", "40"],
    );
    let out = graf(&[
        "fit", "--input", &pts, "--family", "circle", "--algo", "reduced", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let [a, b, r] = circle_params(&v);
    assert!((a - 1.5).abs() < 1e-9 && (b + 2.0).abs() < 1e-9 && (r - 3.0).abs() < 1e-9);
    assert_eq!(v["result"]["converged"], true);
    assert_eq!(v["n"], 40);
}

#[test]
fn geometric_and_reduced_agree_at_small_noise() {
    let dir = tempfile::tempdir().unwrap();
    let sigma = 0.01;
    let pts = generate(
        dir.path(),
        "c.csv",
        &["--params", "0,0,2", "--sigma", "0.01", "-n", "200"],
    );
    let reduced = circle_params(&json(&graf(&["fit", "-i", &pts, "--json"])));
    let geometric = circle_params(&json(&graf(&[
        "fit",
        "-i",
        &pts,
        "--algo",
        "geometric",
        "--json",
    ])));
    for (g, o) in reduced.iter().zip(&geometric) {
        assert!(
            (g - o).abs() <= 10.0 * sigma * sigma * 2.0,
            "{reduced:?} vs {geometric:?}"
        );
    }
}

#[test]
fn fit_runs_from_moment_file_alone() {
    let dir = tempfile::tempdir().unwrap();
    let pts = generate(
        dir.path(),
        "c.csv",
        &["--sigma", "0.02", "-n", "500", "--seed", "9"],
    );
    let mom = dir.path().join("m.json");
    let mom = mom.to_str().unwrap();
    let direct = graf(&["fit", "-i", &pts, "--save-moments", mom, "--json"]);
    assert!(direct.status.success());
    fs::remove_file(&pts).unwrap();
    let offline = graf(&["fit", "--moments", mom, "--json"]);
    assert_eq!(offline.status.code(), Some(0));
    let (a, b) = (json(&direct), json(&offline));
    assert_eq!(a["result"]["params"], b["result"]["params"]);
    assert_eq!(a["result"]["objective"], b["result"]["objective"]);
}

#[test]
fn parallel_accumulation_matches_serial() {
    let dir = tempfile::tempdir().unwrap();
    let pts = generate(dir.path(), "c.csv", &["-n", "5000", "--sigma", "0.05"]);
    let serial = circle_params(&json(&graf(&["fit", "-i", &pts, "--json"])));
    let parallel = circle_params(&json(&graf(&["fit", "-i", &pts, "--parallel", "4", "--json"])));
    for (s, p) in serial.iter().zip(&parallel) {
        assert!((s - p).abs() < 1e-10);
    }
}

#[test]
fn reweight_fits_an_ellipse() {
    let dir = tempfile::tempdir().unwrap();
    let pts = generate(
        dir.path(),
        "e.csv",
        &[
            "--family",
            "ellipse",
            "--params",
            "0,0,2,1,0",
            "--sigma",
            "0",
            "-n",
            "60",
        ],
    );
    let out = graf(&[
        "fit", "-i", &pts, "--family", "ellipse", "--algo", "reweight", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let c: Vec<f64> = json(&out)["result"]["params"]["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    // x²/4 + y² − 1, up to scale
    let s = c[0] * 4.0;
    for (got, want) in c.iter().zip([0.25, 0.0, 1.0, 0.0, 0.0, -1.0]) {
        assert!((got - want * s).abs() < 1e-8, "{c:?}");
    }
}

#[test]
fn reduced_ellipse_fit_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let pts = generate(dir.path(), "e.csv", &["--family", "ellipse"]);
    let out = graf(&["fit", "-i", &pts, "--family", "ellipse"]);
    assert_eq!(out.status.code(), Some(8));
}

#[test]
fn reduced_line_fit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l.csv");
    // x + y = 2
    let text: String = (0..20)
        .map(|i| format!("{},{}\n", i as f64 * 0.1, 2.0 - i as f64 * 0.1))
        .collect();
    fs::write(&path, text).unwrap();
    let out = graf(&["fit", "-i", path.to_str().unwrap(), "--family", "line", "--json"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let theta = &json(&out)["result"]["params"]["theta"];
    let (phi, rho) = (theta[0].as_f64().unwrap(), theta[1].as_f64().unwrap());
    // cos φ x + sin φ y = ρ, so ρ / cos φ = 2 and tan φ = 1
    assert!((phi.tan() - 1.0).abs() < 1e-8);
    assert!((rho / phi.cos() - 2.0).abs() < 1e-8);
}

#[test]
fn bad_family_is_a_usage_error() {
    let out = graf(&["fit", "--input", "x.csv", "--family", "spiral"]);
    assert_eq!(out.status.code(), Some(2));
    let out = graf(&["analyze", "--family", "spiral"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn error_classes_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    assert_eq!(
        graf(&["fit", "-i", missing.to_str().unwrap()]).status.code(),
        Some(1)
    );

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "1,0\n0,abc\n").unwrap();
    let out = graf(&["fit", "-i", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let collinear = dir.path().join("line.csv");
    fs::write(&collinear, "0,0\n1,1\n2,2\n3,3\n4,4\n").unwrap();
    assert_eq!(
        graf(&["fit", "-i", collinear.to_str().unwrap()]).status.code(),
        Some(4)
    );

    let pts = generate(dir.path(), "c.csv", &["--sigma", "0.1", "-n", "50"]);
    let out = graf(&["fit", "-i", &pts, "--max-iterations", "1", "--init", "3,3,0.5"]);
    assert_eq!(out.status.code(), Some(5));

    assert_eq!(graf(&["analyze", "1 x^2 + + y"]).status.code(), Some(3));
}

#[test]
fn analyze_parabola_finds_the_complex_witness() {
    let out = graf(&["analyze", "1 y - 1 x^2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "not_admissible");
    let w = &v["witness"];
    let (xr, xi) = (w["x"][0].as_f64().unwrap(), w["x"][1].as_f64().unwrap());
    let (yr, yi) = (w["y"][0].as_f64().unwrap(), w["y"][1].as_f64().unwrap());
    assert!(xr.abs() < 1e-10 && (xi.abs() - 0.5).abs() < 1e-10, "{w}");
    assert!((yr + 0.25).abs() < 1e-10 && yi.abs() < 1e-10, "{w}");

    let human = stdout(&graf(&["analyze", "1 y - 1 x^2"]));
    assert!(human.contains("NOT ADMISSIBLE"), "{human}");
}

fn parse_rational(s: &str) -> f64 {
    match s.split_once('/') {
        Some((n, d)) => n.trim().parse::<f64>().unwrap() / d.trim().parse::<f64>().unwrap(),
        None => s.trim().parse().unwrap(),
    }
}

#[test]
fn analyze_circle_family_gives_constant_weight() {
    let out = graf(&["analyze", "--family", "circle", "--samples", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for s in v["samples"].as_array().unwrap() {
        assert_eq!(s["verdict"], "admissible");
        let r = s["params"][2].as_f64().unwrap();
        let w = parse_rational(s["certificate"]["w"].as_str().unwrap());
        assert!((w - 1.0 / (4.0 * r * r)).abs() < 1e-12, "{s}");
    }
    assert!(
        stdout(&graf(&["analyze", "--family", "circle", "--samples", "2"])).contains("verdict: ADMISSIBLE")
    );
}

#[test]
fn analyze_ellipse_family_matches_witness_formula() {
    let out = graf(&["analyze", "--family", "ellipse", "--samples", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    for s in json(&out)["samples"].as_array().unwrap() {
        assert_eq!(s["verdict"], "not_admissible");
        let p: Vec<f64> = s["params"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect();
        let (a, b, c) = (p[0], p[1], p[2]);
        let x2 = b * c / (a * (a - b));
        let (xr, xi) = (
            s["witness"]["x"][0].as_f64().unwrap(),
            s["witness"]["x"][1].as_f64().unwrap(),
        );
        // x² from the witness, as a complex square
        let (sq_re, sq_im) = (xr * xr - xi * xi, 2.0 * xr * xi);
        assert!(
            (sq_re - x2).abs() < 1e-8 * (1.0 + x2.abs()) && sq_im.abs() < 1e-8,
            "{s}"
        );
    }
}

#[test]
fn seeded_output_is_reproducible() {
    let a = graf(&["generate", "-n", "20", "--seed", "5"]);
    let b = graf(&["generate", "-n", "20", "--seed", "5"]);
    let c = graf(&["generate", "-n", "20", "--seed", "6"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);

    let env = Command::new(env!("CARGO_BIN_EXE_graf"))
        .args(["generate", "-n", "20"])
        .env("GRAF_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);

    let f1 = json(&graf(&[
        "analyze",
        "--family",
        "hyperbola",
        "--samples",
        "3",
        "--seed",
        "2",
        "--json",
    ]));
    let f2 = json(&graf(&[
        "analyze",
        "--family",
        "hyperbola",
        "--samples",
        "3",
        "--seed",
        "2",
        "--json",
    ]));
    assert_eq!(f1, f2);
}

#[test]
fn fit_output_is_reproducible_apart_from_timings() {
    let dir = tempfile::tempdir().unwrap();
    let pts = generate(dir.path(), "c.csv", &["--sigma", "0.05"]);
    let strip = |mut v: Value| {
        v["result"]["iteration_times"] = Value::Null;
        v
    };
    let a = strip(json(&graf(&["fit", "-i", &pts, "--json"])));
    let b = strip(json(&graf(&["fit", "-i", &pts, "--json"])));
    assert_eq!(a, b);
}

#[test]
fn bench_reports_every_cell() {
    let out = graf(&[
        "bench",
        "--sizes",
        "100,1000",
        "--iterations",
        "2",
        "--reduced-batch",
        "50",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out)["rows"].as_array().unwrap().len();
    assert_eq!(rows, 4);
    assert_eq!(graf(&["bench", "--sizes", "5"]).status.code(), Some(2));
}

#[test]
fn accumulate_writes_a_moment_file() {
    let dir = tempfile::tempdir().unwrap();
    let pts = generate(dir.path(), "c.csv", &["-n", "30"]);
    let out = graf(&["accumulate", "-i", &pts, "--degree", "6"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["degree"], 6);
    assert_eq!(v["n"], 30);
    assert_eq!(v["m"].as_array().unwrap().len(), 28);
}
