use std::path::PathBuf;
use std::process::{Command, Output};

fn data(rel: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data");
    root.join(rel).display().to_string()
}

fn hisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hisc"))
        .args(args)
        .output()
        .expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn moc_violation_exits_one_with_counterexample() {
    let o = hisc(&["check", "moc", &data("moc_gap/plant.des"), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["property"], "moc");
    assert_eq!(v["verdict"], "violated");
    assert_eq!(v["counterexample"], serde_json::json!(["c", "bc"]));
    assert!(v["stats"]["pair_states"].as_u64().unwrap() > 0);
}

#[test]
fn oc_holds_exits_zero() {
    let o = hisc(&["check", "oc", &data("moc_gap/plant.des")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "oc: holds");
}

#[test]
fn bounded_pass_exits_two() {
    // cyclic plant with no high-level observation: `bb` and `ε` look alike
    // above but need different numbers of observable `a`s below
    let dir = tempfile::tempdir().unwrap();
    let plant = dir.path().join("loop.des");
    std::fs::write(
        &plant,
        "events: a[o] b[h] u\nstates: 0 1\ninitial: 0\nmarked: 0\n\
         trans: 0 a 1\ntrans: 1 b 0\ntrans: 1 u 1\n",
    )
    .unwrap();
    let p = plant.to_str().unwrap();
    let o = hisc(&["check", "oc", p, "--bound", "1", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["verdict"], "bounded");
    let o = hisc(&["check", "oc", p, "--bound", "4", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["counterexample"], serde_json::json!(["bb", "ε"]));
}

#[test]
fn oc_violation_golden_is_violated() {
    let o = hisc(&["check", "oc", &data("oc_violation/plant.des"), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["counterexample"], serde_json::json!(["ab", "b"]));
}

#[test]
fn railroad_verify_reports_difference() {
    let o = hisc(&[
        "hier",
        "verify",
        &data("railroad/g1.des"),
        &data("railroad/g2.des"),
        &data("railroad/spec.des"),
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["verdict"], "violated");
    assert_eq!(v["counterexample"], serde_json::json!(["a_e a_w w_e w_w"]));
}

#[test]
fn railroad_plant_is_nonconflicting_and_nonblocking() {
    let o = hisc(&[
        "check",
        "nonconflicting",
        &data("railroad/g1.des"),
        &data("railroad/g2.des"),
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn synth_writes_artifacts_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let sup = dir.path().join("sup.des");
    let cl = dir.path().join("cl.des");
    let o = hisc(&[
        "hier",
        "synth",
        &data("moc_gap/plant.des"),
        &data("moc_gap/spec.des"),
        "--certify",
        "--supervisor",
        sup.to_str().unwrap(),
        "--closed-loop",
        cl.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("MOC:"));
    let v = hisc(&["validate", sup.to_str().unwrap(), cl.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn sup_and_project_produce_automata() {
    let o = hisc(&[
        "sup",
        "normal",
        &data("moc_gap/plant.des"),
        &data("moc_gap/spec.des"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("events:"));

    let o = hisc(&["project", &data("moc_gap/plant.des"), "--onto", "highlevel"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("events: b[h] c[oh]"));

    let o = hisc(&[
        "project",
        &data("moc_gap/plant.des"),
        "--events",
        "a",
        "--dot",
    ]);
    assert!(stdout(&o).starts_with("digraph"));
}

#[test]
fn pair_product_and_composition() {
    let p = data("interleaving/plant.des");
    let o = hisc(&["pairprod", &p, &p, "--sync", "b"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("b|b"));
    let o = hisc(&[
        "parallel",
        &data("railroad/g1.des"),
        &data("railroad/g2.des"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = hisc(&["invproject", &data("moc_gap/spec.des"), "--events", "a[o]"]);
    assert!(stdout(&o).contains("trans"));
}

#[test]
fn generators_write_files_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rand");
    let o = hisc(&[
        "gen",
        "random",
        "--profile",
        "moc-by-construction",
        "--seed",
        "7",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["profile"], "moc-by-construction");
    // the generated instance satisfies MOC by construction
    let o = hisc(&["check", "moc", out.join("plant.des").to_str().unwrap()]);
    assert_ne!(o.status.code(), Some(1));

    let rail = dir.path().join("rail");
    let o = hisc(&["gen", "railroad", "-o", rail.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for name in ["g1", "g2", "spec"] {
        let ours = std::fs::read_to_string(rail.join(format!("{name}.des"))).unwrap();
        let stored = std::fs::read_to_string(data(&format!("railroad/{name}.des"))).unwrap();
        assert_eq!(ours, stored);
    }

    let nfa = dir.path().join("nfa.des");
    std::fs::write(
        &nfa,
        "events: x\nstates: 0\ninitial: 0\nmarked: 0\ntrans: 0 x 0\n",
    )
    .unwrap();
    let gadget = dir.path().join("gadget");
    let o = hisc(&[
        "gen",
        "gadget",
        nfa.to_str().unwrap(),
        "-o",
        gadget.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    // a universal NFA gives an MOC gadget: no violation
    let o = hisc(&[
        "check",
        "moc",
        gadget.join("gadget.des").to_str().unwrap(),
        "--bound",
        "12",
    ]);
    assert_ne!(o.status.code(), Some(1));
}

#[test]
fn workflow_runs_on_railroad() {
    let dir = tempfile::tempdir().unwrap();
    let o = hisc(&[
        "hier",
        "workflow",
        &data("railroad/g1.des"),
        &data("railroad/g2.des"),
        "--spec",
        &data("railroad/spec.des"),
        "--json",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o).as_array().unwrap().len(), 1);
    assert!(dir.path().join("closed_loop0.des").exists());
}

#[test]
fn stats_and_validate() {
    let o = hisc(&["stats", &data("moc_gap/plant.des"), "--json"]);
    assert_eq!(json(&o)[0]["stats"]["states"], 7);
    let o = hisc(&["validate", &data("oc_violation/plant.des")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(hisc(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(hisc(&["check", "oc"]).status.code(), Some(64));
    assert_eq!(
        hisc(&["validate", "/nonexistent/x.des"]).status.code(),
        Some(66)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.des");
    std::fs::write(&bad, "events: a\nstates: 0\ninitial: 0\ntrans: 0 z 0\n").unwrap();
    assert_eq!(
        hisc(&["validate", bad.to_str().unwrap()]).status.code(),
        Some(65)
    );
    assert_eq!(hisc(&["--help"]).status.code(), Some(0));
}
