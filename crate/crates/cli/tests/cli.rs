mod common;

use common::*;
use hwm_core::prefs::parse_profile_text;
use hwm_core::proofcheck::build_perez_profile;

#[test]
fn analyze_unanimous_profile() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("u.txt");
    std::fs::write(&p, "m=4\n5: c>a>d>b\n").unwrap();
    let r = hwm(&["analyze", p.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.field("condorcet winner"), Some("c"));
    assert!(r.field("maximin").unwrap().starts_with("c "));
    for rule in [
        "borda",
        "plurality",
        "black",
        "baldwin",
        "nanson",
        "schulze",
        "ranked-pairs",
    ] {
        assert_eq!(r.field(rule), Some("c"), "{rule}");
    }
    assert!(r.field("kemeny").unwrap().starts_with("c "));
    for set in ["copeland", "uncovered", "top-cycle"] {
        assert_eq!(r.field(set), Some("{c}"), "{set}");
    }
}

#[test]
fn analyze_odd_root_has_no_condorcet_winner() {
    let r = hwm(&["analyze", &data("odd-p0.txt")]);
    assert_eq!(r.field("condorcet winner"), Some("none"));
}

#[test]
fn perez_data_file_matches_the_built_profile() {
    let (_, from_file) = parse_profile_text(&std::fs::read_to_string(data("perez.txt")).unwrap()).unwrap();
    assert!(from_file.same_multiset(&build_perez_profile().1));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.txt");
    std::fs::write(&p, "m=3\n2: a>b>c\n1: a>b>q\n").unwrap();
    let r = hwm(&["analyze", p.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
}

#[test]
fn check_exit_codes() {
    let r = hwm(&[
        "check",
        "--rule",
        "maximin",
        "--m",
        "3",
        "--n",
        "3",
        "--property",
        "hwm",
    ]);
    assert_eq!(r.code, 0);
    assert_eq!(r.field("result"), Some("no violation (exhaustive)"));
    assert_eq!(r.field("budget"), Some("2000000"));
    assert_eq!(r.field("seed"), Some("none"));

    let r = hwm(&[
        "check",
        "--rule",
        "borda",
        "--m",
        "3",
        "--n",
        "2",
        "--property",
        "manipulability",
    ]);
    assert_eq!(r.code, 1);
    assert!(r.field("witness").is_some());

    let r = hwm(&[
        "check",
        "--rule",
        "borda",
        "--m",
        "4",
        "--n",
        "6",
        "--property",
        "hwm",
        "--budget",
        "500",
    ]);
    assert_eq!(r.code, 2);
    assert!(r.field("result").unwrap().starts_with("budget exceeded"));

    let r = hwm(&[
        "check",
        "--rule",
        "nonesuch",
        "--m",
        "3",
        "--n",
        "3",
        "--property",
        "hwm",
    ]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("nonesuch"));
}

#[test]
fn corrupted_table_yields_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.cnf");
    let enc = hwm(&["encode", "--m", "3", "--n", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(enc.code, 0);
    let model = solve_dimacs(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let model_path = dir.path().join("model.txt");
    std::fs::write(&model_path, &model).unwrap();
    let table = dir.path().join("t.txt");
    let map = format!("{}.map", out.display());
    let dec = hwm(&[
        "decode",
        "--model",
        model_path.to_str().unwrap(),
        "--map",
        &map,
        "--out",
        table.to_str().unwrap(),
    ]);
    assert_eq!(dec.code, 0, "{}", dec.stderr);
    let clean = hwm(&["check", "--table", table.to_str().unwrap(), "--property", "hwm"]);
    assert_eq!(clean.code, 0, "{}", clean.stdout);

    let text = std::fs::read_to_string(&table).unwrap();
    let corrupted = corrupt(&text);
    std::fs::write(&table, corrupted).unwrap();
    let bad = hwm(&["check", "--table", table.to_str().unwrap(), "--property", "hwm"]);
    assert_eq!(bad.code, 1, "{}", bad.stdout);
    assert!(bad.field("witness").is_some());
    let v = hwm(&["verify-table", table.to_str().unwrap()]);
    assert_eq!(v.code, 1);
    assert_eq!(v.field("verdict"), Some("violation"));
}

/// Rewrites one entry so that some voter gains by reversing.
fn corrupt(table_text: &str) -> String {
    use hwm_core::prefs::{index_to_profile, profile_to_index, ProfileIndex};
    use hwm_core::rules::{RuleTable, TableKey};
    let mut t = RuleTable::parse(table_text).unwrap();
    let total = 36u64;
    for k in 0..total {
        let p = index_to_profile(ProfileIndex(k), 2, 3).unwrap();
        let top = p.voters()[0].top();
        if t.get(&TableKey::Profile(ProfileIndex(k))).unwrap() != top {
            let q = profile_to_index(&p.reverse_voter(0).unwrap()).unwrap();
            t.set(TableKey::Profile(q), top).unwrap();
            return t.to_text();
        }
    }
    unreachable!("some profile does not elect voter 0's top")
}

#[test]
fn reports_do_not_depend_on_workers() {
    for args in [
        &[
            "check",
            "--rule",
            "schulze",
            "--m",
            "3",
            "--n",
            "4",
            "--property",
            "participation",
        ][..],
        &[
            "check",
            "--rule",
            "borda",
            "--m",
            "4",
            "--n",
            "5",
            "--property",
            "hwm",
            "--budget",
            "3000",
            "--seed",
            "11",
        ],
        &[
            "check",
            "--rule",
            "plurality",
            "--m",
            "3",
            "--n",
            "3",
            "--property",
            "manipulability",
            "--domain",
            "condorcet",
        ],
    ] {
        let base = hwm(args);
        for workers in ["0", "1", "3"] {
            let mut with: Vec<&str> = args.to_vec();
            with.extend(["--workers", workers]);
            let r = hwm(&with);
            assert_eq!(r.stdout, base.stdout, "{args:?} workers={workers}");
            assert_eq!(r.code, base.code);
        }
    }
}

#[test]
fn json_lines() {
    let r = hwm(&[
        "check",
        "--rule",
        "borda",
        "--m",
        "3",
        "--n",
        "2",
        "--property",
        "manipulability",
        "--json",
    ]);
    assert_eq!(r.code, 1);
    for line in r.stdout.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v.is_object());
    }
    assert!(r.stdout.starts_with("{\"budget\":2000000}\n{\"seed\":null}\n"));
}

#[test]
fn proofs_from_files_and_mutations() {
    for (which, file) in [("odd", "odd.tree"), ("even", "even.tree")] {
        let r = hwm(&["verify-proofs", which, "--tree", &data(file)]);
        assert_eq!(r.code, 0, "{}", r.stdout);
        assert_eq!(r.field("verdict"), Some("pass"));
    }
    let text = std::fs::read_to_string(data("odd.tree")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.tree");
    std::fs::write(&p, text.replace("LEAF P6 CONDORCET d", "LEAF P6 CONDORCET c")).unwrap();
    let r = hwm(&["verify-proofs", "odd", "--tree", p.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.field("verdict").unwrap().starts_with("FAIL"));
    std::fs::write(&p, text.replace("EDGE P0 P1", "EDGE P0 P1 BOGUS")).unwrap();
    assert_eq!(hwm(&["verify-proofs", "odd", "--tree", p.to_str().unwrap()]).code, 2);
    let r = hwm(&["verify-proofs", "odd", "--m", "3"]);
    assert_eq!(r.code, 2);
}

#[test]
fn pad_keeps_margins() {
    let r = hwm(&["pad", &data("odd-p0.txt"), "--order", "b>d>a>c", "--pairs", "2"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.field("voters"), Some("15 -> 19"));
    assert_eq!(r.field("margins unchanged"), Some("yes"));
    assert_eq!(r.field("condorcet winner"), Some("none"));
}

#[test]
fn encode_solve_decode_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.cnf");
    let o = out.to_str().unwrap();
    assert_eq!(hwm(&["encode", "--m", "3", "--n", "3", "--out", o]).code, 0);
    let answer = solve_dimacs(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let solver = fake_solver(dir.path(), &answer);

    let r = hwm(&[
        "encode",
        "--m",
        "3",
        "--n",
        "3",
        "--out",
        o,
        "--solve",
        solver.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert_eq!(r.field("status"), Some("SATISFIABLE"));
    assert_eq!(r.field("verdict"), Some("clean"));

    // solver path from the environment
    let r = hwm_env(
        &["encode", "--m", "3", "--n", "3", "--out", o, "--solve"],
        &[("HWM_SOLVER", solver.to_str().unwrap())],
    );
    assert_eq!(r.field("verdict"), Some("clean"));
    let r = hwm(&["encode", "--m", "3", "--n", "3", "--out", o, "--solve"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("HWM_SOLVER"));

    let model = dir.path().join("model.txt");
    std::fs::write(&model, &answer).unwrap();
    let table = dir.path().join("t.txt");
    let map = format!("{o}.map");
    let d = hwm(&[
        "decode",
        "--model",
        model.to_str().unwrap(),
        "--map",
        &map,
        "--out",
        table.to_str().unwrap(),
    ]);
    assert_eq!(d.code, 0);
    assert_eq!(d.field("entries"), Some("216"));
    let v = hwm(&["verify-table", table.to_str().unwrap()]);
    assert_eq!(v.code, 0);
    assert_eq!(v.field("condorcet"), Some("consistent"));
    assert_eq!(v.field("hwm"), Some("no violation"));
}

#[test]
fn c2_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c2.cnf");
    let o = out.to_str().unwrap();
    assert_eq!(
        hwm(&["encode", "--m", "3", "--n", "4", "--mode", "c2", "--out", o]).code,
        0
    );
    let answer = solve_dimacs(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let solver = fake_solver(dir.path(), &answer);
    let r = hwm(&[
        "encode",
        "--m",
        "3",
        "--n",
        "4",
        "--mode",
        "c2",
        "--out",
        o,
        "--solve",
        solver.to_str().unwrap(),
    ]);
    assert_eq!(r.field("verdict"), Some("clean"), "{}", r.stdout);
}

#[test]
fn decode_unsat_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("odd.cnf");
    let o = out.to_str().unwrap();
    let r = hwm(&["encode", "--proof", "odd", "--m", "4", "--out", o]);
    assert_eq!(r.field("variables"), Some("32"));
    assert!(solve_dimacs(&std::fs::read_to_string(&out).unwrap()).is_none());
    let model = dir.path().join("unsat.txt");
    std::fs::write(&model, "s UNSATISFIABLE\n").unwrap();
    let map = format!("{o}.map");
    let d = hwm(&["decode", "--model", model.to_str().unwrap(), "--map", &map]);
    assert_eq!(d.code, 2);
    assert!(d.stderr.contains("UNSATISFIABLE"), "{}", d.stderr);

    let solver = fake_solver(dir.path(), "s UNSATISFIABLE\n");
    let r = hwm(&[
        "encode",
        "--proof",
        "odd",
        "--m",
        "4",
        "--out",
        o,
        "--solve",
        solver.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    assert_eq!(r.field("status"), Some("UNSATISFIABLE"));
}

#[test]
fn solver_models_are_checked_against_the_formula() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.cnf");
    let o = out.to_str().unwrap();
    // all false violates every at-least-one clause
    let lits: Vec<String> = (1..=8).map(|v| format!("-{v}")).collect();
    let solver = fake_solver(dir.path(), &format!("s SATISFIABLE\nv {} 0\n", lits.join(" ")));
    let r = hwm(&[
        "encode",
        "--m",
        "2",
        "--n",
        "2",
        "--out",
        o,
        "--solve",
        solver.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 1);
    assert_eq!(r.field("status"), Some("model does not satisfy the formula"));
}
