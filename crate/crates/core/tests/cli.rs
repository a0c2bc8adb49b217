//! End-to-end runs of the `credal` binary.

mod common;

use std::path::PathBuf;
use std::process::{Command, Output};

use credal::criteria::{self, CriterionId};
use credal::maxent::MaxEntOptions;
use credal::problem::Problem;
use credal::report::{self, ResultDocument};
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::*;

fn file(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn example(name: &str) -> PathBuf {
    file(&format!("examples/{name}.json"))
}

fn fixture(name: &str) -> PathBuf {
    file(&format!("tests/fixtures/{name}.json"))
}

fn credal(args: &[&str], path: &PathBuf) -> Output {
    Command::new(env!("CARGO_BIN_EXE_credal"))
        .args(args)
        .arg(path)
        .env_remove("CREDAL_LOG")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str], path: &PathBuf) -> ResultDocument {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = credal(&full, path);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    ResultDocument::from_json(&stdout(&out)).unwrap()
}

fn chosen(doc: &ResultDocument) -> &str {
    &doc.decision.as_ref().unwrap().chosen
}

fn problem(path: &PathBuf) -> Problem {
    Problem::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn decide_on_worked_examples() {
    assert_eq!(
        chosen(&json(&["decide", "--criterion", "gm"], &example("coin"))),
        "a3"
    );
    assert_eq!(
        chosen(&json(
            &["decide", "--criterion", "pme"],
            &example("shape_color")
        )),
        "a_WS"
    );
    assert_eq!(
        chosen(&json(
            &["decide", "--criterion", "gm"],
            &example("shape_color")
        )),
        "a_BC"
    );
    assert_eq!(
        chosen(&json(&["decide", "--criterion", "levi"], &example("coin"))),
        "a1"
    );
    assert_eq!(
        chosen(&json(
            &["decide", "--criterion", "regret"],
            &example("coin")
        )),
        "a3"
    );
    assert_eq!(
        chosen(&json(
            &["decide", "--criterion", "maximin"],
            &example("hurwicz")
        )),
        "a1"
    );
    assert_eq!(
        chosen(&json(
            &["decide", "--criterion", "regret"],
            &example("hurwicz")
        )),
        "a2"
    );
    assert_eq!(
        chosen(&json(
            &["decide", "--criterion", "hurwicz", "--alpha", "0"],
            &example("hurwicz")
        )),
        "a2"
    );
    let at = json(
        &["decide", "--criterion", "gh", "--alpha", "944/944.1"],
        &example("hurwicz"),
    );
    let ranking = &at.decision.as_ref().unwrap().ranking;
    assert_eq!(ranking[0].score, ranking[1].score);
    assert_eq!(chosen(&at), "a1");
    for c in ["gm", "levi", "pme"] {
        assert_eq!(
            chosen(&json(
                &["decide", "--criterion", c],
                &example("three_table")
            )),
            "a_WS",
            "{c}"
        );
    }
}

#[test]
fn intervals_on_worked_examples() {
    let doc = json(&["intervals"], &example("shape_color"));
    let got: Vec<(String, String)> = doc
        .intervals
        .unwrap()
        .into_iter()
        .map(|u| (u.lo, u.hi))
        .collect();
    let want = [
        ("-1/2", "4"),
        ("1/10", "17/5"),
        ("-50", "127"),
        ("-1", "23/10"),
    ];
    assert_eq!(got, want.map(|(a, b)| (a.to_string(), b.to_string())));

    let doc = json(&["intervals"], &example("three_table"));
    let got: Vec<(String, String)> = doc
        .intervals
        .unwrap()
        .into_iter()
        .map(|u| (u.lo, u.hi))
        .collect();
    let want = [
        ("-1/2", "5/2"),
        ("6/5", "17/5"),
        ("9", "127"),
        ("-1", "6/5"),
    ];
    assert_eq!(got, want.map(|(a, b)| (a.to_string(), b.to_string())));

    // A single-point set gives degenerate intervals at EU(p).
    let doc = json(&["intervals"], &fixture("point"));
    for (u, eu) in doc.intervals.unwrap().iter().zip(["3/10", "13/10"]) {
        assert_eq!((u.lo.as_str(), u.hi.as_str()), (eu, eu));
    }
}

#[test]
fn reduce_reports_the_reduced_model() {
    let doc = json(&["reduce"], &example("three_table"));
    let red = doc.reduction.unwrap();
    assert_eq!(red.reduced, [vec!["C", "M"], vec!["M", "S"]]);
    assert_eq!(red.dropped_variables, ["A", "D", "U"]);

    let doc = json(&["reduce"], &example("channels"));
    assert_eq!(
        doc.reduction.unwrap().reduced,
        [vec!["A", "D"], vec!["B", "D"]]
    );

    let doc = json(&["reduce", "--intervals"], &example("three_table"));
    assert_eq!(doc.intervals.unwrap()[2].lo, "9");
}

#[test]
fn admissible_lists_witnesses() {
    let doc = json(&["admissible"], &example("coin"));
    let adm = doc.admissible.unwrap();
    let names: Vec<&str> = adm.iter().map(|a| a.action.as_str()).collect();
    assert_eq!(names, ["a1", "a2"]);
    assert_eq!(adm[0].witness["H"], "3/5");
    assert_eq!(adm[1].witness["H"], "2/5");

    let doc = json(&["admissible"], &fixture("single_action"));
    assert_eq!(doc.admissible.unwrap()[0].action, "only");

    // Same answer as the library.
    let p = problem(&example("shape_color"));
    let lib = report::run_admissible(&p).unwrap();
    assert_eq!(json(&["admissible"], &example("shape_color")), lib);
}

#[test]
fn maxent_output() {
    let doc = json(&["maxent"], &example("shape_color"));
    let m = doc.maxent.unwrap();
    let exact = m.exact.unwrap();
    let values: Vec<&str> = exact.values().map(String::as_str).collect();
    assert_eq!(values, ["21/50", "7/25", "9/50", "3/25"]);
    assert_eq!(m.iterations, 1);
    assert!((m.entropy - entropy_nats(&[0.42, 0.28, 0.18, 0.12])).abs() < 1e-12);

    let two = json(&["maxent", "--base", "2"], &example("shape_color"))
        .maxent
        .unwrap();
    assert!((two.entropy - m.entropy / std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn maxent_of_random_file_reproduces_tables() {
    let mut rng = StdRng::seed_from_u64(7);
    let space = binary_space(4);
    let p = random_distribution(&mut rng, &space);
    let blocks: [&[&str]; 3] = [&["V0", "V1"], &["V1", "V2"], &["V2", "V3"]];
    let mut marginals = Vec::new();
    for block in blocks {
        let set: credal::VarSet = block.iter().map(|s| s.to_string()).collect();
        let table = p.project(&set).unwrap();
        let cells: serde_json::Map<String, serde_json::Value> = table
            .space()
            .state_labels()
            .into_iter()
            .zip(table.mass())
            .map(|(label, m)| {
                (
                    label,
                    serde_json::Value::String(credal::rational::format_fraction(m)),
                )
            })
            .collect();
        marginals.push(serde_json::json!({ "block": block, "table": cells }));
    }
    let zero: serde_json::Map<String, serde_json::Value> = space
        .state_labels()
        .into_iter()
        .map(|l| (l, serde_json::Value::String("0".into())))
        .collect();
    let doc = serde_json::json!({
        "variables": { "V0": ["0", "1"], "V1": ["0", "1"], "V2": ["0", "1"], "V3": ["0", "1"] },
        "actions": ["a"],
        "utilities": { "a": zero },
        "constraints": { "marginals": marginals }
    });
    let dir = std::env::temp_dir().join(format!("credal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("random.json");
    std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();

    let m = json(&["maxent"], &path).maxent.unwrap();
    let mass: Vec<f64> = m.distribution.values().copied().collect();
    for block in blocks {
        let set: credal::VarSet = block.iter().map(|s| s.to_string()).collect();
        let got = marginal_f64(&space, &mass, &set);
        let want = p.project(&set).unwrap();
        for (g, w) in got.iter().zip(want.mass()) {
            assert!((g - credal::rational::to_f64(w)).abs() <= 1e-12);
        }
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_output_round_trips_to_library_results() {
    let path = example("shape_color");
    let p = problem(&path);
    let cases: Vec<(Vec<&str>, ResultDocument)> = vec![
        (vec!["check"], report::run_check(&p).unwrap()),
        (vec!["intervals"], report::run_intervals(&p).unwrap()),
        (
            vec!["decide", "--criterion", "gh", "--alpha", "0.3"],
            report::run_decide(&p, CriterionId::Gh, Some(&r("0.3"))).unwrap(),
        ),
        (
            vec!["maxent"],
            report::run_maxent(&p, &MaxEntOptions::default()).unwrap(),
        ),
    ];
    for (args, lib) in cases {
        assert_eq!(json(&args, &path), lib, "{args:?}");
    }
    // Parsed fractions equal the in-memory rationals.
    let k = p.credal_set().unwrap();
    let intervals = criteria::utility_intervals(&p.decision, &k).unwrap();
    let doc = json(&["intervals"], &path);
    for (rec, u) in doc.intervals.unwrap().iter().zip(&intervals) {
        assert_eq!(r(&rec.lo), u.lo);
        assert_eq!(r(&rec.hi), u.hi);
    }
    let maxent = json(&["maxent"], &example("three_table"));
    let lib =
        report::run_maxent(&problem(&example("three_table")), &MaxEntOptions::default()).unwrap();
    assert_eq!(maxent, lib);
}

#[test]
fn output_is_byte_deterministic() {
    for (args, name) in [
        (vec!["intervals"], "three_table"),
        (vec!["maxent", "--format", "json"], "three_table"),
        (vec!["decide", "--criterion", "levi"], "coin"),
        (vec!["admissible", "--format", "json"], "shape_color"),
        (vec!["reduce", "--intervals"], "channels"),
    ] {
        let a = credal(&args, &example(name));
        let b = credal(&args, &example(name));
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?} {name}");
    }
}

#[test]
fn exit_codes() {
    let ok = credal(&["check"], &example("shape_color"));
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("consistent: yes"));

    let empty = credal(&["check"], &fixture("contradictory"));
    assert_eq!(empty.status.code(), Some(2));
    assert!(stdout(&empty).contains("consistent: no"));
    for args in [
        vec!["intervals"],
        vec!["decide", "--criterion", "gm"],
        vec!["maxent"],
        vec!["admissible"],
    ] {
        assert_eq!(
            credal(&args, &fixture("contradictory")).status.code(),
            Some(2),
            "{args:?}"
        );
    }

    for (args, path) in [
        (vec!["decide", "--criterion", "gh"], example("hurwicz")),
        (
            vec!["decide", "--criterion", "gh", "--alpha", "1.5"],
            example("hurwicz"),
        ),
        (
            vec!["decide", "--criterion", "nonsense"],
            example("hurwicz"),
        ),
        (vec!["decide", "--criterion", "pme"], example("coin")),
        (vec!["intervals"], fixture("float_literal")),
        (vec!["intervals"], fixture("unknown_state")),
        (vec!["intervals"], fixture("does_not_exist")),
        (vec!["frobnicate"], example("coin")),
    ] {
        let out = credal(&args, &path);
        assert_eq!(out.status.code(), Some(1), "{args:?} {}", path.display());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn mixed_constraint_file() {
    let doc = json(&["intervals"], &fixture("mixed_constraints"));
    let iv = doc.intervals.unwrap();
    // K: 0.1 <= p1 <= 0.6, p2 >= p3, p1 + p2 >= 1/2.
    assert_eq!((iv[0].lo.as_str(), iv[0].hi.as_str()), ("1", "6"));
    assert_eq!((iv[1].lo.as_str(), iv[1].hi.as_str()), ("2", "9"));
    assert_eq!((iv[2].lo.as_str(), iv[2].hi.as_str()), ("4", "4"));
}
