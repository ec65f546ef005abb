use std::process::{Command, Output};
use std::sync::Arc;

use fibred::fibred::{FibredElement, FibredSpace, TransitiveFibredBiset};
use fibred::group::group_from_spec;
use fibred::hat::character_from_generators;
use fibred::json::{element_from_json, element_to_json, FibredElementJson};

fn fibred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibred")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn group_census() {
    let q8 = fibred(&["group", "Q8", "--json"]);
    assert_eq!(q8.status.code(), Some(0));
    let v = json(&q8);
    assert_eq!(v["center_order"], 2);
    assert_eq!(v["frattini_order"], 2);
    assert_eq!(v["subgroup_count"], 6);
    assert_eq!(v["out_order"], 6);

    let d8 = json(&fibred(&["group", "D8", "--json"]));
    assert_eq!(d8["subgroup_count"], 10);

    let c1 = json(&fibred(&["group", "C1", "--json"]));
    assert_eq!(
        (c1["order"].as_u64(), c1["subgroup_count"].as_u64(), c1["out_order"].as_u64()),
        (Some(1), Some(1), Some(1))
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(fibred(&["group", "Q9"]).status.code(), Some(2));
    assert_eq!(fibred(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(fibred(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(fibred(&["hat", "C4", "C2", "--catalog-max-order", "16"]).status.code(), Some(2));
    assert_eq!(fibred(&["hat", "Q8", "C2", "--catalog-max-order", "5"]).status.code(), Some(2));
    assert_eq!(fibred(&["compose", "{not json", "{}"]).status.code(), Some(2));
}

#[test]
fn basis_counts() {
    let c2 = json(&fibred(&["basis", "C2", "C2", "--json"]));
    assert_eq!(c2.as_array().unwrap().len(), 3);
    let c1 = json(&fibred(&["basis", "C1", "C5", "--json"]));
    assert_eq!(c1.as_array().unwrap().len(), 1);
    let q8 = fibred(&["basis", "Q8", "C2"]);
    let space = FibredSpace::single(Arc::new(group_from_spec("Q8").unwrap()), Arc::new(group_from_spec("C2").unwrap()))
        .unwrap();
    assert!(stdout(&q8).starts_with(&format!("{} classes", space.classes().unwrap().len())));
    let pair = json(&fibred(&["basis", "C2|C3", "C3", "--json"]));
    assert_eq!(pair[0]["group_spec"], "C2|C3");
}

fn counterexample_x() -> TransitiveFibredBiset {
    let q8 = Arc::new(group_from_spec("Q8").unwrap());
    let d8 = Arc::new(group_from_spec("D8").unwrap());
    let c4 = Arc::new(group_from_spec("C4").unwrap());
    let space = FibredSpace::biset(q8.clone(), d8.clone(), c4.clone()).unwrap();
    let p = space.product();
    let at = |g: &fibred::group::FiniteGroup, l: &str| g.element_by_label(l).unwrap();
    let gens = [
        (p.pack(&[at(&q8, "x"), at(&d8, "a")]), at(&c4, "c^2")),
        (p.pack(&[at(&q8, "y"), at(&d8, "b")]), at(&c4, "c^3")),
    ];
    let delta = character_from_generators(p, &c4, &gens).unwrap();
    TransitiveFibredBiset::new(space, delta).unwrap()
}

#[test]
fn compose_counterexample_gives_the_idempotent() {
    let x = counterexample_x();
    let xj = serde_json::to_string(&element_to_json(&x.to_element())).unwrap();
    let xoj = serde_json::to_string(&element_to_json(&x.opposite().unwrap().to_element())).unwrap();
    let out = fibred(&["compose", &xj, &xoj, "--check", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let w: FibredElementJson = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(w.terms.len(), 1);
    assert_eq!(w.terms[0].coeff, 1);
    assert_eq!(w.terms[0].d.len(), 16);
    let w = element_from_json(&w).unwrap();
    assert!(fibred::fibred::is_idempotent(&w).unwrap());
}

#[test]
fn compose_identity_with_identity() {
    let g = Arc::new(group_from_spec("S3").unwrap());
    let space = FibredSpace::biset(g.clone(), g, Arc::new(group_from_spec("C3").unwrap())).unwrap();
    let id = serde_json::to_string(&element_to_json(&FibredElement::identity(space).unwrap())).unwrap();
    let out = fibred(&["compose", &id, &id, "--check", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let back: FibredElementJson = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), id);
}

#[test]
fn compose_reads_files() {
    let dir = std::env::temp_dir().join(format!("fibred-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let x = counterexample_x();
    let path = dir.join("x.json");
    std::fs::write(&path, serde_json::to_string(&element_to_json(&x.to_element())).unwrap()).unwrap();
    let path_o = dir.join("xo.json");
    std::fs::write(&path_o, serde_json::to_string(&element_to_json(&x.opposite().unwrap().to_element())).unwrap())
        .unwrap();
    let out = fibred(&["compose", path_o.to_str().unwrap(), path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("over D8×D8"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn hat_reports() {
    let c4 = json(&fibred(&["hat", "C4", "C2", "--json"]));
    assert_eq!(c4["brute_dimension"], 6);
    assert_eq!(c4["formula_dimension"], 6);
    assert_eq!(c4["products_checked"], 36);
    assert_eq!(c4["mismatches"].as_array().unwrap().len(), 0);
    assert_eq!(c4["table"].as_array().unwrap().len(), 6);

    let s3 = json(&fibred(&["hat", "S3", "C2", "--json"]));
    assert_eq!(s3["brute_dimension"], 2);

    let q8 = fibred(&["hat", "Q8", "C4", "--json"]);
    assert_eq!(q8.status.code(), Some(0));
    let v = json(&q8);
    assert!(v.get("table").is_none());
    assert!(v["dimension"].as_u64().unwrap() > 0);
}

#[test]
fn counterexample_command() {
    let text = fibred(&["counterexample"]);
    assert_eq!(text.status.code(), Some(0));
    let s = stdout(&text);
    assert!(s.contains("k₁(D) = ⟨x²⟩"));
    assert!(s.contains("searched 9 groups"));
    let v = json(&fibred(&["counterexample", "--json"]));
    assert_eq!(v["searched_q8"].as_array().unwrap().len(), 9);
    assert!(v["steps"].as_array().unwrap().iter().all(|s| s["passed"] == true));
}

#[test]
fn verify_suites_are_deterministic() {
    for suite in ["axioms", "oracle", "prime"] {
        let a = fibred(&["verify", suite, "--seed", "11", "--json"]);
        assert_eq!(a.status.code(), Some(0), "{suite}: {}", stdout(&a));
        let b = fibred(&["verify", suite, "--seed", "11", "--json"]);
        assert_eq!(a.stdout, b.stdout);
    }
}
