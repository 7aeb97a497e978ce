use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const GENERIC: &str = r#"{"spheres":[
  {"center":[0,0,0],"radius":1},
  {"center":[3,0.5,0],"radius":1.2},
  {"center":[1,2.7,0.3],"radius":0.9},
  {"center":[0.7,1,2.5],"radius":1.1}]}"#;

const CYLINDER: &str = r#"{"spheres":[
  {"center":[0,0,0],"radius":1},
  {"center":[1,0,0],"radius":1},
  {"center":[2.5,0,0],"radius":1},
  {"center":[4,0,0],"radius":1}]}"#;

const BOX_SPHERES: &str = r#"{"spheres":[
  {"center":[1,1,1],"radius":1.45},
  {"center":[1,-1,-1],"radius":1.45},
  {"center":[-1,1,-1],"radius":1.45},
  {"center":[-1,-1,1],"radius":1.45}]}"#;

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tangentloci"));
    cmd.args(args).env_remove("TANGENTLOCI_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn generic_instance_has_twelve_tangents() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "g.json", GENERIC);
    let out = run(&["tangents", &input], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["complex_count"], 12);
    assert_eq!(v["regime"], "generic");
    let mult: u64 = v["tangents"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["multiplicity"].as_u64().unwrap())
        .sum();
    assert_eq!(mult, 12);
}

#[test]
fn equal_radii_on_a_line_give_a_sampled_cylinder() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c.json", CYLINDER);
    let out = run(&["tangents", &input], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let class = &v["degenerate"]["classes"][0];
    assert_eq!(class["class"], "Cylinder");
    assert_eq!(class["sample_tangents"].as_array().unwrap().len(), 10);
}

#[test]
fn truncated_input_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "t.json", &GENERIC[..40]);
    let out = run(&["tangents", &input], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn missing_file_and_bad_tolerance_are_input_errors() {
    assert_eq!(run(&["tangents", "/nonexistent/x.json"], &[]).status.code(), Some(1));
    assert_eq!(run(&["--tol", "2", "selfcheck"], &[]).status.code(), Some(1));
    assert_eq!(run(&["--tol-cluster", "0", "selfcheck"], &[]).status.code(), Some(1));
}

#[test]
fn batch_output_keeps_input_order() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "b.json", &format!("[{CYLINDER},{GENERIC},{BOX_SPHERES}]"));
    let out = run(&["tangents", &input], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let regimes: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["regime"].as_str().unwrap()).collect();
    assert_eq!(regimes[0], "collinear");
    assert_eq!(regimes[1], "generic");
    assert_eq!(regimes[2], "generic");
    assert_eq!(v[2]["real_count"], 12);
}

#[test]
fn csv_is_a_long_flattening_of_the_json() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "g.json", GENERIC);
    let out = run(&["tangents", &input, "--format", "csv"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("instance,key,value"));
    assert!(text.lines().any(|l| l == "0,complex_count,12"));
}

#[test]
fn demos_report_their_configurations() {
    let reye = json(&run(&["demo", "reye"], &[]));
    assert_eq!(reye["points"], 12);
    assert_eq!(reye["lines"], 16);
    assert_eq!(reye["ok"], true);

    let d5 = json(&run(&["demo", "double5"], &[]));
    assert_eq!(d5["pencils_with_rank_one"], 25);

    let bp = json(&run(&["demo", "basket-pair"], &[]));
    assert!(bp["residual"].as_f64().unwrap() < 1e-9);

    let q = run(&["demo", "quadrilateral"], &[]);
    assert_eq!(q.status.code(), Some(0));
}

#[test]
fn unknown_demo_lists_the_available_ones() {
    let out = run(&["demo", "tetrahedron"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    for name in ["reye", "double5", "basket-pair", "quadrilateral"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn selfcheck_passes_at_default_settings() {
    let out = run(&["selfcheck"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["failed"].as_array().unwrap().is_empty());
}

#[test]
fn selfcheck_csv_has_one_row_per_check() {
    let json_out = json(&run(&["selfcheck"], &[]));
    let n = json_out["checks"].as_array().unwrap().len();
    let out = run(&["selfcheck", "--format", "csv"], &[]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("name,passed,value,threshold"));
    assert_eq!(text.lines().count(), n + 1);
}

#[test]
fn coarse_tolerance_fails_the_documented_checks() {
    let out = run(&["selfcheck", "--tol", "1e-2"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let failed: Vec<&str> = v["failed"].as_array().unwrap().iter().map(|f| f.as_str().unwrap()).collect();
    assert_eq!(
        failed,
        ["baskets.basket_curves", "baskets.desargues", "linegeom.duality", "linegeom.orthogonality"]
    );
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "b.json", &format!("[{GENERIC},{CYLINDER}]"));
    for args in [vec!["tangents", input.as_str()], vec!["demo", "double5"], vec!["selfcheck", "--seed", "7"]] {
        let a = run(&args, &[]);
        let b = run(&args, &[]);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn seed_comes_from_the_environment_only_without_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "g.json", GENERIC);
    let env = json(&run(&["tangents", &input], &[("TANGENTLOCI_SEED", "41")]));
    assert_eq!(env["seed"], 41);
    let flag = json(&run(&["tangents", &input, "--seed", "5"], &[("TANGENTLOCI_SEED", "41")]));
    assert_eq!(flag["seed"], 5);
    let none = json(&run(&["tangents", &input], &[]));
    assert_eq!(none["seed"], 0);
    assert_eq!(run(&["selfcheck"], &[("TANGENTLOCI_SEED", "x")]).status.code(), Some(1));
}

#[test]
fn instance_seed_and_tol_override_the_flags() {
    let dir = tempfile::tempdir().unwrap();
    let inst = GENERIC.trim_end_matches('}').to_string() + r#","seed":9,"tol":1e-9}"#;
    let input = write(dir.path(), "g.json", &inst);
    let v = json(&run(&["tangents", &input, "--seed", "3"], &[]));
    assert_eq!(v["seed"], 9);
    assert_eq!(v["tol"].as_f64(), Some(1e-9));
}

#[test]
fn obj_export_writes_meshes_and_segments() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s.json", BOX_SPHERES);
    let obj = dir.path().join("scene.obj");
    let out = run(&["tangents", &input, "--emit-obj", obj.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("o ") && l.contains("sphere")).count(), 4);
    assert_eq!(text.lines().filter(|l| l.starts_with("l ")).count(), 12);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 4 * 320);
}
