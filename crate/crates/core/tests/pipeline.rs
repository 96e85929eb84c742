//! End-to-end runs of the command-line pipeline on the bundled sails.

use std::path::{Path, PathBuf};

use sailstress::cli::run;
use sailstress::exactnum::Vec3;
use sailstress::io::{format_rat, read_file, write_document, Document};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["sailstress"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn point_arg(p: &Vec3) -> String {
    p.0.iter().map(format_rat).collect::<Vec<_>>().join(",")
}

/// The lift of the first face of `surface`, in `--seed` syntax.
fn seed_arg(surface: &Path) -> String {
    let s = read_file(surface).unwrap().into_surface().unwrap();
    s.faces()[0][..3]
        .iter()
        .map(|&v| format!("{v}:{}", point_arg(&s.vertices()[v])))
        .collect::<Vec<_>>()
        .join(";")
}

fn pipeline(spec: &str, window: &str, plane: &str) {
    let dir = tempfile::tempdir().unwrap();
    let surface = dir.path().join("surface.json");
    let framework = dir.path().join("framework.json");
    let lifted = dir.path().join("lifted.json");
    let relifted_framework = dir.path().join("framework2.json");
    let spec = fixture(spec);

    let (code, _, err) = call(&["sail", "--spec", s(&spec), "--window", window, "-o", s(&surface)]);
    assert_eq!(code, 0, "{err}");
    let (code, _, err) = call(&["project", "--surface", s(&surface), "--plane", plane, "-o", s(&framework)]);
    assert_eq!(code, 0, "{err}");
    let (code, out, err) = call(&[
        "verify",
        "--framework",
        s(&framework),
        "--projective",
        "--surface",
        s(&surface),
        "--periodic",
        "--spec",
        s(&spec),
    ]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.ends_with("result: PASS\n"), "{out}");

    let seed = seed_arg(&surface);
    let (code, out, err) = call(&["lift", "--framework", s(&framework), "--seed", &seed, "-o", s(&lifted)]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.contains("monodromy zero"), "{out}");
    assert_eq!(
        std::fs::read_to_string(&lifted).unwrap(),
        std::fs::read_to_string(&surface).unwrap(),
        "lifted surface differs from the generated one"
    );

    let (code, _, err) = call(&["project", "--surface", s(&lifted), "--plane", plane, "-o", s(&relifted_framework)]);
    assert_eq!(code, 0, "{err}");
    let (code, out, err) = call(&["verify", "--framework", s(&relifted_framework), "--projective", "--surface", s(&lifted)]);
    assert_eq!(code, 0, "{out}{err}");
}

#[test]
fn golden_pipeline() {
    pipeline("golden.sailspec.json", "-2..2,-2..2", "0,0,1;1");
}

#[test]
fn pentagon_pipeline() {
    pipeline("pentagon.sailspec.json", "-2..2,-2..2", "0,1,0;1");
}

#[test]
fn family_pipelines() {
    for a in 0..3 {
        pipeline(&format!("family_a{a}.sailspec.json"), "-2..2,-2..2", "2,1,1;1");
    }
}

#[test]
fn sail_window_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("s.json");
    let (code, out, _) = call(&["sail", "--spec", s(&fixture("golden.sailspec.json")), "--window", "-1..1,-1..1", "-o", s(&out_path)]);
    assert_eq!(code, 0);
    assert!(out.starts_with("patch: 9 vertices"), "{out}");

    let (code, _, _) = call(&["sail", "--spec", s(&fixture("pentagon.sailspec.json")), "--window", "0..1,0..1", "-o", s(&out_path)]);
    assert_eq!(code, 0);
    let patch = read_file(&out_path).unwrap().into_surface().unwrap();
    let orbits: std::collections::BTreeSet<usize> = patch.labels().unwrap().iter().map(|l| l.k).collect();
    assert_eq!(orbits.len(), 3);
}

#[test]
fn sail_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("s.json");
    let spec = fixture("golden.sailspec.json");
    let (code, out, err) = call(&[
        "sail", "--spec", s(&spec), "--window", "-3..3,-3..3", "--oracle", "--bound", "6", "-o", s(&out_path),
    ]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.contains("oracle: agree"), "{out}");
}

#[test]
fn tampered_generators_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = read_file(&fixture("golden.sailspec.json")).unwrap().into_sailspec().unwrap();
    spec.m.0[0][0] += 1;
    let path = dir.path().join("bad.json");
    std::fs::write(&path, write_document(&Document::SailSpec(spec))).unwrap();
    let (code, _, err) = call(&["sail", "--spec", s(&path), "--window", "0..1,0..1", "-o", s(&dir.path().join("x.json"))]);
    assert_eq!(code, 2);
    assert!(err.contains("GeneratorsRejected"), "{err}");
}

#[test]
fn projection_errors() {
    let dir = tempfile::tempdir().unwrap();
    let surface = dir.path().join("s.json");
    let framework = dir.path().join("f.json");
    call(&["sail", "--spec", s(&fixture("golden.sailspec.json")), "--window", "0..1,0..1", "-o", s(&surface)]);
    let (code, _, err) = call(&["project", "--surface", s(&surface), "--plane", "0,0,1;0", "-o", s(&framework)]);
    assert_eq!(code, 2);
    assert!(err.contains("InvalidPlane"), "{err}");
    // x = 0 contains the ray through the seed (0,0,1)
    let (code, _, err) = call(&["project", "--surface", s(&surface), "--plane", "1,0,0;1", "-o", s(&framework)]);
    assert_eq!(code, 2);
    assert!(err.contains("ImproperPlane"), "{err}");
}

#[test]
fn perturbed_stress_fails_verification_and_lift() {
    let dir = tempfile::tempdir().unwrap();
    let surface = dir.path().join("s.json");
    let framework = dir.path().join("f.json");
    let perturbed = dir.path().join("p.json");
    call(&["sail", "--spec", s(&fixture("golden.sailspec.json")), "--window", "-2..2,-2..2", "-o", s(&surface)]);
    call(&["project", "--surface", s(&surface), "--plane", "0,0,1;1", "-o", s(&framework)]);
    let mut f = read_file(&framework).unwrap().into_framework().unwrap();
    // an edge between two interior vertices
    let k = f
        .edges
        .iter()
        .position(|e| f.interior[e.i] && f.interior[e.j])
        .unwrap();
    let w = f.edges[k].omega_bar.as_mut().unwrap();
    *w += sailstress::exactnum::rat(1, 1);
    std::fs::write(&perturbed, write_document(&Document::Framework(f))).unwrap();

    let (code, out, _) = call(&["verify", "--framework", s(&perturbed)]);
    assert_eq!(code, 1);
    assert_eq!(out.matches("  vertex ").count(), 2, "{out}");

    let seed = seed_arg(&surface);
    let (code, _, err) = call(&["lift", "--framework", s(&perturbed), "--seed", &seed, "-o", s(&dir.path().join("l.json"))]);
    assert_eq!(code, 1, "{err}");
    assert!(err.contains("MonodromyNonzero"), "{err}");

    let (code, _, err) = call(&["lift", "--framework", s(&framework), "--seed", "0:0,0,1;1:0,0,1;999:1,1,1", "-o", s(&dir.path().join("l.json"))]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn render_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let surface = dir.path().join("s.json");
    let framework = dir.path().join("f.json");
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    call(&["sail", "--spec", s(&fixture("golden.sailspec.json")), "--window", "-2..2,-2..2", "-o", s(&surface)]);
    call(&["project", "--surface", s(&surface), "--plane", "0,0,1;1", "-o", s(&framework)]);
    assert_eq!(call(&["render", "--framework", s(&framework), "-o", s(&a), "--labels"]).0, 0);
    assert_eq!(call(&["render", "--framework", s(&framework), "-o", s(&b), "--labels"]).0, 0);
    let svg = std::fs::read_to_string(&a).unwrap();
    assert_eq!(svg, std::fs::read_to_string(&b).unwrap());
    let f = read_file(&framework).unwrap().into_framework().unwrap();
    assert_eq!(svg.matches("<line ").count(), f.edges.len());
    assert_eq!(svg.matches("<text ").count(), f.vertices.len());

    let mut empty = f.clone();
    empty.vertices.clear();
    empty.betas.clear();
    empty.edges.clear();
    empty.faces = None;
    empty.interior.clear();
    empty.labels = None;
    let e = dir.path().join("e.json");
    std::fs::write(&e, write_document(&Document::Framework(empty))).unwrap();
    let (code, _, err) = call(&["render", "--framework", s(&e), "-o", s(&a)]);
    assert_eq!(code, 2);
    assert!(err.contains("EmptyFramework"), "{err}");
}
