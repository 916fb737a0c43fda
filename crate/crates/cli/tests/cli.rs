use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use volterra::{volterra_norm, Exponent, Signal};

fn volterra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_volterra")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn point_mass_file(dir: &Path, name: &str, index: usize) -> PathBuf {
    let body: String = (0..10).map(|i| if i == index { "10\n" } else { "0\n" }).collect();
    write(dir, name, &body)
}

#[test]
fn norm_examples() {
    let dir = tempfile::tempdir().unwrap();
    let ones = write(dir.path(), "ones.txt", "1.0\n1.0\n1.0\n1.0\n");
    let o = volterra(&["norm", s(&ones), "--p", "inf"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1.000000000000\n");
    assert!(o.stderr.is_empty());
    assert_eq!(stdout(&volterra(&["norm", s(&ones), "--p", "1"])), "0.625000000000\n");
    assert_eq!(stdout(&volterra(&["norm", s(&ones), "--p", "1", "--plain"])), "1.000000000000\n");
    assert_eq!(stdout(&volterra(&["norm", s(&ones), "--p", "INF"])), "1.000000000000\n");
}

#[test]
fn norm_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let values = [0.3, -1.7, 2.25, 0.0, 1e-3, -0.5, 4.0];
    let body: String = values.iter().map(|v| format!("{v}\n")).collect();
    let f = write(dir.path(), "x.txt", &body);
    let x = Signal::new(values.to_vec()).unwrap();
    for p in ["1", "1.5", "2", "10", "inf"] {
        let expected = volterra_norm(&x, p.parse::<Exponent>().unwrap());
        assert_eq!(stdout(&volterra(&["norm", s(&f), "--p", p])), format!("{expected:.12}\n"));
    }
}

#[test]
fn norm_errors() {
    let dir = tempfile::tempdir().unwrap();
    let ones = write(dir.path(), "ones.txt", "1\n1\n");
    let bad = write(dir.path(), "bad.txt", "1\nabc\n");
    let empty = write(dir.path(), "empty.txt", "\n\n");
    assert_eq!(volterra(&["norm", s(&ones), "--p", "0.5"]).status.code(), Some(3));
    assert_eq!(volterra(&["norm", s(&ones), "--p", "two"]).status.code(), Some(3));
    assert_eq!(volterra(&["norm", s(&ones), "--p", "nan"]).status.code(), Some(3));
    let o = volterra(&["norm", s(&bad), "--p", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("abc"));
    assert_eq!(volterra(&["norm", s(&empty), "--p", "1"]).status.code(), Some(2));
    assert_eq!(volterra(&["norm", "/nonexistent/file", "--p", "1"]).status.code(), Some(2));
    assert_eq!(volterra(&["norm", s(&ones)]).status.code(), Some(2));
}

#[test]
fn csv_column_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "x.csv", "t,signal\n0.25,1\n0.5,1\n0.75,1\n1.0,1\n");
    assert_eq!(stdout(&volterra(&["norm", s(&f), "--p", "1", "--column", "signal"])), "0.625000000000\n");
    assert_eq!(stdout(&volterra(&["norm", s(&f), "--p", "1", "--column", "1", "--header"])), "0.625000000000\n");
    assert_eq!(volterra(&["norm", s(&f), "--p", "1", "--column", "missing"]).status.code(), Some(2));
}

#[test]
fn dist_examples() {
    let dir = tempfile::tempdir().unwrap();
    let a = point_mass_file(dir.path(), "a.txt", 2);
    let b = point_mass_file(dir.path(), "b.txt", 7);
    assert_eq!(stdout(&volterra(&["dist", s(&a), s(&a), "--p", "2"])), "0.000000000000\n");
    assert_eq!(stdout(&volterra(&["dist", s(&a), s(&b), "--emd"])), "0.500000000000\n");
    assert_eq!(stdout(&volterra(&["dist", s(&a), s(&b), "--km"])), "1.000000000000\n");
    // --emd and --km agree with --p 1 and --p inf on densities.
    assert_eq!(stdout(&volterra(&["dist", s(&a), s(&b), "--p", "1"])), "0.500000000000\n");
    assert_eq!(stdout(&volterra(&["dist", s(&a), s(&b), "--p", "inf"])), "1.000000000000\n");
    // Plain distance between the two spikes: (1/n)(10 + 10) = 2.
    assert_eq!(stdout(&volterra(&["dist", s(&a), s(&b), "--p", "1", "--plain"])), "2.000000000000\n");
}

#[test]
fn dist_errors() {
    let dir = tempfile::tempdir().unwrap();
    let a = point_mass_file(dir.path(), "a.txt", 2);
    let short = write(dir.path(), "short.txt", "1\n1\n");
    let heavy = write(dir.path(), "heavy.txt", &"2\n".repeat(10));
    let negative = write(dir.path(), "neg.txt", &format!("-1\n{}", "1\n".repeat(9)));
    assert_eq!(volterra(&["dist", s(&a), s(&short), "--p", "1"]).status.code(), Some(4));
    assert_eq!(volterra(&["dist", s(&a), s(&short), "--emd"]).status.code(), Some(4));
    assert_eq!(volterra(&["dist", s(&a), s(&heavy), "--emd"]).status.code(), Some(5));
    assert_eq!(volterra(&["dist", s(&a), s(&negative), "--km"]).status.code(), Some(5));
    assert_eq!(volterra(&["dist", s(&a), s(&negative), "--km", "--renormalize"]).status.code(), Some(5));
    let o = volterra(&["dist", s(&a), s(&heavy), "--emd", "--renormalize"]);
    assert!(o.status.success());
    // The rescaled input is the uniform density.
    let f = volterra::Density::point_mass(10, 2).unwrap();
    let g = volterra::Density::renormalized(vec![2.0; 10]).unwrap();
    assert_eq!(stdout(&o), format!("{:.12}\n", volterra::emd(&f, &g).unwrap()));
    assert_eq!(volterra(&["dist", s(&a), s(&a), "--p", "0"]).status.code(), Some(3));
    assert_eq!(volterra(&["dist", s(&a), s(&a), "--emd", "--km"]).status.code(), Some(2));
    assert_eq!(volterra(&["dist", s(&a), s(&a)]).status.code(), Some(2));
}

fn experiment(kind: &str, config: &Path) -> Output {
    volterra(&["experiment", kind, "--config", s(config)])
}

#[test]
fn noise_experiment_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "noise.json",
        r#"{"n_values":[100,200],"trials":1,"variance":2,"p_values":[1,"inf"],"seed":5,"signal":"triangle"}"#,
    );
    let a = experiment("noise", &cfg);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = experiment("noise", &cfg);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("parameter,p,value,family,n,trials,seed"));
    let first = lines.next().unwrap();
    assert!(first.starts_with("100.0,1.0,"), "{first}");
    assert!(first.ends_with(",noise-error,100,1,5"), "{first}");
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 2);
}

#[test]
fn experiment_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "shift.json", r#"{"signal":"triangle","n":100,"eps":[0,0.1],"p_values":[1]}"#);
    let out = dir.path().join("shift.csv");
    let o = volterra(&["experiment", "shift", "--config", s(&cfg), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let rows = volterra::experiments::read_csv(fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0].value, 0.0);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("shift.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["n"], 100);
    assert!(manifest["git_describe"].is_string());
    assert!(manifest["wall_time_seconds"].as_f64().unwrap() >= 0.0);

    let explicit = dir.path().join("m.json");
    let o = volterra(&["experiment", "shift", "--config", s(&cfg), "--out", s(&out), "--manifest", s(&explicit)]);
    assert!(o.status.success());
    assert!(explicit.exists());
}

#[test]
fn radon_experiment_starts_at_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "radon.json",
        r#"{"grid":{"two_gaussian":{"m":32,"sigma":0.01}},"n":32,"theta":[0,0.3],"p_values":[2]}"#,
    );
    let o = experiment("radon", &cfg);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = volterra::experiments::read_csv(o.stdout.as_slice()).unwrap();
    assert_eq!(rows[0].parameter, 0.0);
    assert_eq!(rows[0].value, 0.0);
    assert!(rows.iter().any(|r| r.parameter == 0.3 && r.value > 0.0));
}

#[test]
fn radon_experiment_from_grid_files() {
    let dir = tempfile::tempdir().unwrap();
    let grid = volterra::Grid2D::from_fn(16, |x, y| (0.2 - (x * x + y * y).sqrt()).max(0.0), 1e-8).unwrap();
    let (csv, header) = (dir.path().join("g.csv"), dir.path().join("g.json"));
    grid.save(&csv, &header).unwrap();
    let body = format!(
        r#"{{"grid":{{"file":{{"csv":{:?},"header":{:?}}}}},"n":16,"theta":[0,1],"p_values":[1]}}"#,
        s(&csv),
        s(&header)
    );
    let cfg = write(dir.path(), "radon.json", &body);
    let o = experiment("radon", &cfg);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn experiment_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("noise", r#"{"n_values":[100],"trials":0,"variance":2,"p_values":[1],"seed":0,"signal":"triangle"}"#),
        ("noise", r#"{"n_values":[200,100],"trials":1,"variance":2,"p_values":[1],"seed":0,"signal":"triangle"}"#),
        ("noise", r#"{"n_values":[100],"trials":1,"variance":-1,"p_values":[1],"seed":0,"signal":"triangle"}"#),
        ("noise", r#"{"n_values":[100],"trials":1,"variance":2,"p_values":[0.5],"seed":0,"signal":"triangle"}"#),
        ("noise", r#"{"n_values":[100],"trials":1,"variance":2,"p_values":[1],"seed":0,"signal":"square"}"#),
        ("noise", r#"{"n_values":[100],"trials":1,"variance":2,"p_values":[1],"seed":0,"signal":"triangle","x":1}"#),
        ("shift", r#"{"signal":"triangle","n":100,"eps":[0.9],"p_values":[1]}"#),
        ("shift", r#"{"signal":"triangle","n":100,"eps":[],"p_values":[1]}"#),
        ("radon", r#"{"grid":{"two_gaussian":{"m":1,"sigma":0.01}},"n":8,"theta":[0],"p_values":[1]}"#),
        ("radon", "not json"),
    ];
    for (i, (kind, body)) in cases.iter().enumerate() {
        let cfg = write(dir.path(), &format!("c{i}.json"), body);
        let o = experiment(kind, &cfg);
        assert_eq!(o.status.code(), Some(2), "case {i}: {body}");
        assert!(o.stdout.is_empty(), "case {i}");
    }
    assert_eq!(experiment("noise", Path::new("/nonexistent.json")).status.code(), Some(2));
}

#[test]
fn verify_command() {
    let o = volterra(&["verify", "--n", "2", "--trials", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.starts_with("PASS ")), "{text}");

    let o = volterra(&["verify", "--n", "16", "--trials", "50", "--corrupt-norm"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL ")));

    assert_eq!(volterra(&["verify", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn verify_defaults_pass() {
    let o = volterra(&["verify"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn bad_thread_setting_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let ones = write(dir.path(), "ones.txt", "1\n1\n1\n1\n");
    let o = Command::new(env!("CARGO_BIN_EXE_volterra"))
        .args(["norm", s(&ones), "--p", "1"])
        .env("VOLTERRA_THREADS", "zero")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0.625000000000\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("VOLTERRA_THREADS"));
}

fn shipped_config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/configs").join(name)
}

#[test]
fn shipped_configs_are_valid() {
    let read = |name: &str| fs::read_to_string(shipped_config(name)).unwrap();
    let noise: volterra::NoiseConfig = serde_json::from_str(&read("noise.json")).unwrap();
    noise.validate().unwrap();
    let radon: volterra::RadonConfig = serde_json::from_str(&read("radon.json")).unwrap();
    assert_eq!(radon.theta.values().unwrap().len(), 33);
    for name in ["shift-triangle.json", "shift-spiked.json"] {
        let o = experiment("shift", &shipped_config(name));
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        let rows = volterra::experiments::read_csv(o.stdout.as_slice()).unwrap();
        assert_eq!(rows.len(), 61 * 4 * 2);
    }
}
