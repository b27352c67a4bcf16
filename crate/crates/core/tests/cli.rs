use std::path::Path;
use std::process::{Command, Output};

use ravg::cli::{RunConfig, SuiteReport};

const TINY: &str = r#"
experiments = ["lemma3", "lemma4", "transport", "lemma2", "lq-bounds", "theorem1", "scaling", "norm-equivalence"]

[family]
count = 1

[grid]
nt = 12
nx = [12, 12, 12]
time_order = 12
time_panels = 64
ball = [4, 4, 8]

[budget]
phase_points = 2048
pair_points = 4096
shifts = 4

[slices]
directions = 3
epsilons = [0.1, 0.5]
points = 10000

[transport]
sources = 1

[lq]
sources = 1

[theorem1]
sources = 1
pairs = [[3.0, 0.2]]

[scaling]
lambdas = [0.8, 1.0, 1.25]

[equivalence]
sources = 2
max_spread = 0.3
"#;

fn ravg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ravg")).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn svgs(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".svg"))
        .collect();
    v.sort();
    v
}

#[test]
fn bad_configs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("unknown.toml", "horizont = 1.0\n"),
        ("eps.toml", "eps0 = 0.6\n"),
        ("pair.toml", "[theorem1]\npairs = [[2.0, 0.5]]\n"),
        ("experiment.toml", "experiments = [\"nope\"]\n"),
        ("syntax.toml", "horizon = = 1\n"),
    ];
    for (name, body) in cases {
        let cfg = write_config(dir.path(), name, body);
        let out = ravg(&["run", &cfg]);
        assert_eq!(out.status.code(), Some(2), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = ravg(&["run", "/nonexistent/ravg.toml"]);
    assert_eq!(out.status.code(), Some(2));
    let out = ravg(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_key_error_points_at_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", "horizon = 1.0\n\n[grid]\nnt = 12\nnodes = 3\n");
    let out = ravg(&["run", &cfg]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(2));
    assert!(err.contains("nodes") && err.contains("line 5"), "{err}");
}

#[test]
fn slab_sweep_alone_writes_one_row_per_direction_and_epsilon() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = ravg(&["lemma3", "--out", out_dir.to_str().unwrap(), "--directions", "200", "--points", "10000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("name,lhs,rhs,margin,mc_error,pass"));
    assert_eq!(lines.count(), 200 * 6);
    assert_eq!(svgs(&out_dir), vec!["lemma3.svg".to_string()]);
}

#[test]
fn zero_family_passes() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!("{TINY}\n").replace("[family]\ncount = 1", "[family]\nkind = \"zero\"\ncount = 1");
    let cfg = write_config(dir.path(), "zero.toml", &body);
    let out_dir = dir.path().join("out");
    let out = ravg(&["run", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: SuiteReport = serde_json::from_slice(&std::fs::read(out_dir.join("report.json")).unwrap()).unwrap();
    assert!(report.all_pass());
    assert!(report.notes.iter().any(|n| n.contains("scaling")));
}

#[test]
fn tiny_suite_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "tiny.toml", TINY);
    let mut bodies = Vec::new();
    for k in 0..2 {
        let out_dir = dir.path().join(format!("out{k}"));
        let out = ravg(&["run", &cfg, "--out", out_dir.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        bodies.push(std::fs::read_to_string(out_dir.join("report.json")).unwrap());
    }
    let strip = |b: &str| {
        let mut v: serde_json::Value = serde_json::from_str(b).unwrap();
        v["config"].as_object_mut().unwrap().remove("output");
        v
    };
    assert_eq!(strip(&bodies[0]), strip(&bodies[1]));

    let report: SuiteReport = serde_json::from_str(&bodies[0]).unwrap();
    assert_eq!(report.to_json().unwrap(), bodies[0]);
    assert!(report.all_pass());
    let scaling = report.scaling.as_ref().unwrap();
    assert_eq!(scaling.target, -1.5);

    let out_dir = dir.path().join("out0");
    assert_eq!(svgs(&out_dir), vec!["lemma3.svg", "lemma4.svg", "margins.svg", "scaling.svg"]);
    for name in svgs(&out_dir) {
        let text = std::fs::read_to_string(out_dir.join(&name)).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(doc.root_element().tag_name().name(), "svg");
    }
    let text = std::fs::read_to_string(out_dir.join("scaling.svg")).unwrap();
    assert!(text.contains("target seminorm slope"));
    let meta = std::fs::read_to_string(out_dir.join("run-meta.txt")).unwrap();
    assert!(meta.contains("seconds.lemma2"));
}

#[test]
fn family_seed_override_changes_the_sources() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", "experiments = [\"transport\"]\n[transport]\nsources = 2\n");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(ravg(&["run", &cfg, "--out", a.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(ravg(&["run", &cfg, "--out", b.to_str().unwrap(), "--family-seed", "99"]).status.code(), Some(0));
    let ca = std::fs::read_to_string(a.join("summary.csv")).unwrap();
    let cb = std::fs::read_to_string(b.join("summary.csv")).unwrap();
    assert_ne!(ca, cb);
}

#[test]
fn shipped_default_config_matches_the_built_in_defaults() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml");
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(RunConfig::parse(&text).unwrap(), RunConfig::default());
}
