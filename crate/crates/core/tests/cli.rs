use std::path::PathBuf;
use std::process::Command;

use obf_core::cli::doc::{foliation_document, DocKind, Document};
use obf_core::foliation::standard::split_sphere;
use obf_core::movie::standard::rigid_sphere_movie;
use obf_core::stabilize::{Crossing, StabilizationSpec};
use obf_core::Sign;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn obf(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_obf"))
        .args(args)
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("obf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p: PathBuf = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn census_of_the_split_sphere() {
    let p = scratch("split.json", &foliation_document(&split_sphere()).unwrap());
    let r = obf(&["census", &p]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("elliptics 2 "));
    assert!(r.stdout.contains("hyperbolics 0 "));
}

#[test]
fn generated_spheres_validate() {
    let g = obf(&["generate", "--seed", "5", "--tiles", "10"]);
    assert_eq!(g.code, 0);
    let p = scratch("grown.json", &g.stdout);
    assert_eq!(obf(&["validate", &p]).code, 0);
    assert_eq!(
        obf(&["generate", "--seed", "5", "--tiles", "10"]).stdout,
        g.stdout
    );
}

#[test]
fn rigid_sphere_reduction_is_obstructed() {
    let movie = Document::wrap(DocKind::Movie, &rigid_sphere_movie())
        .unwrap()
        .to_json()
        .unwrap();
    let compiled = obf(&["compile", &scratch("rigid_movie.json", &movie)]);
    assert_eq!(compiled.code, 0, "{}", compiled.stderr);
    let p = scratch("rigid.json", &compiled.stdout);
    let r = obf(&["reduce", &p, "--fdtc", "C1=0"]);
    assert_eq!(r.code, 2);
    assert!(
        r.stderr.contains("does not admit exchange moves"),
        "{}",
        r.stderr
    );
}

#[test]
fn emitted_traces_audit() {
    let g = obf(&["generate", "--seed", "11", "--tiles", "8"]);
    let p = scratch("reduce_in.json", &g.stdout);
    let t = scratch("reduce_trace.json", "");
    assert_eq!(obf(&["reduce", &p, "--trace", &t]).code, 0);
    let a = obf(&["audit", &t]);
    assert_eq!(a.code, 0);
    assert!(a.stdout.contains("\"matches\": true"));
}

#[test]
fn applied_moves_append_to_a_trace() {
    let p = scratch(
        "split_for_apply.json",
        &foliation_document(&split_sphere()).unwrap(),
    );
    let t = scratch("apply_trace.json", "");
    std::fs::remove_file(&t).unwrap();
    let site = r#"{"move":"exchange_inverse","site":{"node":1,"leaves":[1,1],"sign":1}}"#;
    let r = obf(&["apply", "--move", site, &p, "--trace", &t]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let q = scratch("two_tiles.json", &r.stdout);
    assert!(obf(&["census", &q]).stdout.starts_with("elliptics 4 "));
    let r = obf(&[
        "apply",
        "--move",
        r#"{"move":"exchange","v":3}"#,
        &q,
        "--trace",
        &t,
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(obf(&["census", &scratch("back.json", &r.stdout)])
        .stdout
        .starts_with("elliptics 2 "));
    let a = obf(&["audit", &t]);
    assert_eq!(a.code, 0);
    assert!(a.stdout.contains("\"steps\": 2"));
}

#[test]
fn guard_failures_exit_2_and_bad_input_exit_3() {
    let p = scratch(
        "split_again.json",
        &foliation_document(&split_sphere()).unwrap(),
    );
    let r = obf(&["apply", "--move", r#"{"move":"exchange","v":1}"#, &p]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.starts_with("guard failed"));
    assert_eq!(obf(&["apply", "--move", "{", &p]).code, 3);
    assert_eq!(obf(&["census", &scratch("broken.json", "[1,")]).code, 3);
    assert_eq!(obf(&["census", "/nonexistent/obf.json"]).code, 3);
}

#[test]
fn stabilize_relates_both_sides() {
    let g = obf(&["generate", "--seed", "2", "--tiles", "4", "--changes", "0"]);
    let mut doc: serde_json::Value = serde_json::from_str(&g.stdout).unwrap();
    doc["payload"].as_object_mut().unwrap().remove("page");
    let f = scratch("stab_in.json", &doc.to_string());
    let leaf = obf_core::stabilize::collar_leaves(
        &serde_json::from_value(doc["payload"].clone()).unwrap(),
    )[0];
    let spec = StabilizationSpec {
        alpha: None,
        sign: Sign::Pos,
        crossings: vec![Crossing { leaf, upward: true }],
    };
    let s = scratch(
        "spec.json",
        &Document::wrap(DocKind::Spec, &spec)
            .unwrap()
            .to_json()
            .unwrap(),
    );
    let r = obf(&["stabilize", "--spec", &s, &f, "--variant", "relate"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let t = scratch("relate.json", &r.stdout);
    assert_eq!(obf(&["audit", &t]).code, 0);
    for variant in ["prime", "doubleprime"] {
        let r = obf(&["stabilize", "--spec", &s, &f, "--variant", variant]);
        assert_eq!(
            obf(&["validate", &scratch(&format!("{variant}.json"), &r.stdout)]).code,
            0
        );
    }
}
