use std::path::Path;
use std::process::{Command, Output};

fn phaseprint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phaseprint"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn labels(json: &str) -> Vec<String> {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    v["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["label"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn classify_whorl_template() {
    let o = phaseprint(&["classify", "--template", "whorl"]);
    assert!(o.status.success());
    assert_eq!(labels(&stdout(&o)), ["Cusp", "Center", "Cusp"]);
}

#[test]
fn classify_linear_center_from_text() {
    let o = phaseprint(&["classify", "--field", "y ; -x", "--domain", "-1,1,-1,1"]);
    assert!(o.status.success());
    assert_eq!(labels(&stdout(&o)), ["Center"]);
}

#[test]
fn classify_degenerate_spiral_template() {
    let o = phaseprint(&["classify", "--template", "degenerate-spiral"]);
    assert!(o.status.success());
    assert_eq!(labels(&stdout(&o)), ["Cusp", "FocusOrCenter", "Cusp"]);
}

#[test]
fn index_of_a_small_circle() {
    let o = phaseprint(&["index", "--field", "x ; -y", "--contour", "circle:0,0,0.5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["index"]["value"], "-1");
}

#[test]
fn index_of_the_domain_boundary() {
    let o = phaseprint(&["index", "--template", "whorl"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["enclosed"]["consistent"], true);
}

#[test]
fn connexion_verdicts_and_exit_codes() {
    let ok = phaseprint(&["connexion", "--genus", "0", "--points", "saddle,node,node,focus"]);
    assert_eq!(ok.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(v["total_index"], "2");
    assert_eq!(v["feasible"], true);

    let bad = phaseprint(&["connexion", "--genus", "0", "--points", "center,cusp,cusp"]);
    assert_eq!(bad.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&bad)).unwrap();
    assert_eq!(v["total_index"], "1");
    assert_eq!(v["feasible"], false);
}

#[test]
fn connexion_reads_a_points_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("points.txt");
    std::fs::write(&file, "# torus\nsaddle\ncenter\n").unwrap();
    let o = phaseprint(&["connexion", "--genus", "1", "--points-file", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn synth_whorl_prints_the_field() {
    let o = phaseprint(&["synth", "--builtin", "whorl"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "y ; -x^5+2*x^3-x\n");
}

#[test]
fn synth_output_classifies_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("field.txt");
    let o = phaseprint(&["synth", "--builtin", "whorl", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let field = std::fs::read_to_string(&out).unwrap();
    let c = phaseprint(&["classify", "--field", field.trim(), "--domain", "-2,2,-1,1"]);
    assert_eq!(labels(&stdout(&c)), ["Cusp", "Center", "Cusp"]);
}

#[test]
fn synth_pendulum_verifies() {
    let o = phaseprint(&["synth", "--builtin", "pendulum", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verification"]["passed"], true);
}

#[test]
fn synth_failed_verification_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.toml");
    let text = r#"
[[points]]
at = "0"
multiplicity = 1
conditions = ["f' = -1"]

[verify]
domain = "-1,1,-1,1"

[[verify.points]]
at = ["0", "0"]
label = "saddle"
"#;
    std::fs::write(&file, text).unwrap();
    let o = phaseprint(&["synth", "--constraints", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "y ; -x\n");
}

#[test]
fn synth_dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("whorl.toml");
    let d = phaseprint(&["synth", "--builtin", "whorl", "--dump-constraints", "--out", file.to_str().unwrap()]);
    assert!(d.status.success());
    let o = phaseprint(&["synth", "--constraints", file.to_str().unwrap()]);
    assert_eq!(stdout(&o), "y ; -x^5+2*x^3-x\n");
}

fn read(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap()
}

#[test]
fn outputs_are_byte_identical_across_runs_and_modes() {
    let dir = tempfile::tempdir().unwrap();
    let runs = [vec![], vec![], vec!["--sequential"]];
    let jobs: [&[&str]; 3] = [
        &["portrait", "--template", "whorl"],
        &["orient", "--template", "spiral", "--grid", "32x16"],
        &["classify", "--template", "twist"],
    ];
    let exts = ["svg", "pgm", "json"];
    for (job, ext) in jobs.iter().zip(exts) {
        let mut outputs = Vec::new();
        for (k, extra) in runs.iter().enumerate() {
            let out = dir.path().join(format!("{k}.{ext}"));
            let mut args: Vec<&str> = job.to_vec();
            args.extend(extra);
            args.extend(["--out", out.to_str().unwrap()]);
            let o = phaseprint(&args);
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
            outputs.push(read(&out));
        }
        assert!(!outputs[0].is_empty());
        assert_eq!(outputs[0], outputs[1], "{job:?}");
        assert_eq!(outputs[0], outputs[2], "{job:?}");
    }
}

#[test]
fn portrait_formats() {
    let svg = phaseprint(&["portrait", "--field", "y ; -x", "--domain", "-1,1,-1,1"]);
    assert!(svg.status.success());
    assert!(stdout(&svg).starts_with("<svg"));
    let csv = phaseprint(&["portrait", "--template", "plain-arch", "--format", "csv"]);
    assert!(csv.status.success());
    assert!(stdout(&csv).lines().count() > 10);
}

#[test]
fn portrait_reads_seeds_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("seeds.toml");
    std::fs::write(&file, "[[seeds]]\nat = { point = [0.5, 0.0] }\ndirection = \"both\"\n").unwrap();
    let o = phaseprint(&["portrait", "--field", "y ; -x", "--seeds", file.to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn dump_config_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("settings.toml");
    let o = phaseprint(&["--dump-config", "--tol", "integration.rtol=1e-10"]);
    assert!(o.status.success());
    std::fs::write(&file, &o.stdout).unwrap();
    let again = phaseprint(&["--config", file.to_str().unwrap(), "--dump-config"]);
    assert_eq!(again.stdout, o.stdout);
    assert!(stdout(&o).contains("rtol = 1e-10") || stdout(&o).contains("rtol = 0.0000000001"));
}

#[test]
fn input_errors_exit_1() {
    for args in [
        vec!["classify", "--field", "y ;"],
        vec!["classify", "--template", "loop"],
        vec!["classify", "--template", "whorl", "--domain", "1,0,0,1"],
        vec!["classify", "--template", "whorl", "--format", "svg"],
        vec!["classify"],
        vec!["orient", "--template", "whorl", "--grid", "12"],
        vec!["--tol", "integration.nope=1", "--dump-config"],
        vec!["connexion", "--points", "whorl"],
    ] {
        let o = phaseprint(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn non_isolated_zero_set_exits_2() {
    let o = phaseprint(&["classify", "--field", "x*y ; x*y"]);
    assert_eq!(o.status.code(), Some(2));
}
