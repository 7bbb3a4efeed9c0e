use std::path::PathBuf;
use std::process::{Command, Output};

use ratimm::report::{ImmersionReport, MapSphereReport, ModelReport, VerifyReport};

fn manifold(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", "manifolds", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn ratimm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ratimm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn stiefel_examples() {
    let o = ratimm(&["stiefel", "--m", "2", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("x2  degree 7"), "{text}");
    assert!(text.contains("support       {0, 7}"), "{text}");

    let o = ratimm(&["stiefel", "--m", "2", "--k", "2", "--format", "json"]);
    let r: ModelReport = serde_json::from_str(&stdout(&o)).unwrap();
    let support: Vec<usize> = r.betti.iter().enumerate().filter(|(_, &b)| b > 0).map(|(n, _)| n).collect();
    assert_eq!(support, vec![0, 2, 3, 5]);
}

#[test]
fn invalid_parameters_exit_2_with_one_line() {
    let o = ratimm(&["stiefel", "--m", "2", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("k >= 2"));
    assert!(o.stdout.is_empty());

    assert_eq!(ratimm(&["stiefel", "--m", "2"]).status.code(), Some(2));
    assert_eq!(ratimm(&["immersion", "--manifold", "/nonexistent.toml", "--k", "3"]).status.code(), Some(2));
}

#[test]
fn immersion_exit_codes() {
    let o = ratimm(&["immersion", "--manifold", &manifold("s2.toml"), "--k", "3", "--max-degree", "15", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: ImmersionReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.series.unwrap(), vec![1, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0]);

    let o = ratimm(&["immersion", "--manifold", &manifold("cp2.toml"), "--k", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("hypotheses    failed"));

    let o = ratimm(&["immersion", "--manifold", &manifold("s2.toml"), "--k", "2"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("symbolic"));
}

#[test]
fn map_sphere_and_framed_model() {
    let o = ratimm(&["map-sphere", "--manifold", &manifold("s3.toml"), "--k", "2", "--max-degree", "10", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: MapSphereReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.model.unwrap().betti, vec![1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]);

    let o = ratimm(&["framed-model", "--manifold", &manifold("s4.toml"), "--k", "2", "--unreduced", "--max-degree", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("reduction     quasi-isomorphism"), "{text}");
    assert!(text.contains("rationally trivial"), "{text}");

    let o = ratimm(&["framed-model", "--manifold", &manifold("cp2.toml"), "--k", "2", "--max-degree", "12"]);
    assert!(stdout(&o).contains("not established"));
}

#[test]
fn cohomology_reports_file_positions() {
    let dir = std::env::temp_dir().join(format!("ratimm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("s2.toml");
    std::fs::write(&good, "kind = \"free\"\nlabel = \"S^2\"\ngenerators = [\n  { name = \"e\", degree = 2 },\n  { name = \"x\", degree = 3 },\n]\n\n[differential]\nx = \"e^2\"\n").unwrap();
    let o = ratimm(&["cohomology", good.to_str().unwrap(), "--max-degree", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("support       {0, 2}"));

    let bad = dir.join("bad.toml");
    std::fs::write(&bad, std::fs::read_to_string(&good).unwrap().replace("e^2", "e^2 + q")).unwrap();
    let o = ratimm(&["cohomology", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 9, column 12: differential.x"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic_and_out_flag_writes_the_same_bytes() {
    let args = ["immersion", "--manifold", &manifold("s3.toml"), "--k", "2", "--format", "json"];
    let a = ratimm(&args);
    let b = ratimm(&args);
    assert_eq!(a.stdout, b.stdout);

    let path = std::env::temp_dir().join(format!("ratimm-out-{}.json", std::process::id()));
    let mut with_out: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    with_out.extend(["--out", &p]);
    let c = ratimm(&with_out);
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn verify_core_suite() {
    let o = ratimm(&["verify", "--suite", "core", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: VerifyReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.failed, 0);
    let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
    assert!(names.contains(&"koszul-commutativity") && names.contains(&"basis-counts"), "{names:?}");
}
