use std::collections::BTreeSet;

use hwm_core::prefs::{enumerate_orders, index_to_profile, profile_to_index, Alternative, ProfileIndex};
use hwm_core::proofcheck::{build_even_tree, build_odd_tree, verify_tree, ProofTree};
use hwm_core::rules::{rule_by_name, RuleTable, TableKey, TieBreak};
use hwm_core::satgen::*;
use hwm_core::scan::ScanConfig;
use hwm_core::tally::{condorcet_winner, MarginMatrix};
use hwm_core::Error;
use varisat::{ExtendFormula, Lit, Solver};

fn solve(f: &CnfFormula) -> Option<Assignment> {
    let mut solver = Solver::new();
    for clause in f.clauses() {
        let lits: Vec<Lit> = clause.iter().map(|&l| Lit::from_dimacs(l as isize)).collect();
        solver.add_clause(&lits);
    }
    if !solver.solve().unwrap() {
        return None;
    }
    let mut values = vec![false; f.num_vars()];
    for lit in solver.model().unwrap() {
        if lit.index() < values.len() {
            values[lit.index()] = lit.is_positive();
        }
    }
    assert!(f.is_satisfied_by(&values));
    // through the text format, as an external solver would deliver it
    let text = Assignment::from_bools(&values).to_model_text();
    Some(read_dimacs_model(&text, f.num_vars()).unwrap())
}

#[test]
fn full_pipeline_m3_n3() {
    let e = encode_full(3, 3, EncodingMode::Profile, &EncodeConfig::default()).unwrap();
    assert_eq!(e.formula.num_vars(), 648);
    assert_eq!(e.counts.functionality, 216 + 216 * 3);
    assert_eq!(e.counts.condorcet, 204);
    assert_eq!(e.counts.hwm, 216 * 3 * 3);
    let model = solve(&e.formula).expect("satisfiable");
    let table = decode_model(&model, &e.map).unwrap();
    assert_eq!(table.len(), 216);
    let report = verify_rule(&table, &ScanConfig::default()).unwrap();
    assert!(report.is_clean(), "{report:?}");
}

#[test]
fn c2_pipeline() {
    for (n, m) in [(3, 3), (4, 3), (5, 3), (2, 4), (3, 4)] {
        let e = encode_full(n, m, EncodingMode::C2, &EncodeConfig::default()).unwrap();
        let model = solve(&e.formula).unwrap_or_else(|| panic!("c2 n={n} m={m} unsatisfiable"));
        let table = decode_model(&model, &e.map).unwrap();
        let report = verify_rule(&table, &ScanConfig::default()).unwrap();
        assert!(report.is_clean(), "n={n} m={m}: {report:?}");
    }
}

#[test]
fn one_voter_two_alternatives() {
    let e = encode_full(1, 2, EncodingMode::Profile, &EncodeConfig::default()).unwrap();
    let units: Vec<&[i32]> = e.formula.clauses().filter(|c| c.len() == 1).collect();
    // a>b is profile 0, its x[P, a] is variable 1
    assert_eq!(units[0], &[1]);
    assert_eq!(e.map.decode_var(1), Some((0, Alternative(0))));
}

fn count_true(model: &Assignment, vars: impl Iterator<Item = i32>) -> usize {
    vars.filter(|&v| model.value(v as usize) == Some(true)).count()
}

#[test]
fn corrupted_models_are_caught() {
    let e = encode_full(3, 3, EncodingMode::Profile, &EncodeConfig::default()).unwrap();
    let model = solve(&e.formula).unwrap();
    let m = 3;

    // two winners at profile 7
    let mut two = model.clone();
    for a in 0..m {
        two.0[7 * m + a] = Some(true);
    }
    assert_eq!(
        decode_model(&two, &e.map),
        Err(Error::NotAFunction {
            key: "7".into(),
            true_count: 3
        })
    );
    let mut partial = model.clone();
    partial.0[5] = None;
    assert!(matches!(decode_model(&partial, &e.map), Err(Error::MalformedModel(_))));

    // move the first Condorcet profile's choice to another alternative
    let (k, cw) = (0..216)
        .find_map(|k| condorcet_winner(&index_to_profile(ProfileIndex(k), 3, 3).unwrap()).map(|x| (k as usize, x)))
        .unwrap();
    let mut moved = model.clone();
    let other = Alternative(((cw.id() + 1) % m) as u8);
    moved.0[k * m + cw.id()] = Some(false);
    moved.0[k * m + other.id()] = Some(true);
    assert_eq!(
        count_true(&moved, (0..m).map(|a| e.map.var(k, Alternative(a as u8)))),
        1
    );
    let report = verify_rule(&decode_model(&moved, &e.map).unwrap(), &ScanConfig::default()).unwrap();
    let (p, x, chosen) = report.condorcet_violation.unwrap();
    assert_eq!(profile_to_index(&p).unwrap(), ProfileIndex(k as u64));
    assert_eq!((x, chosen), (cw, other));

    // a planted reversal gain: voter 0 reverses and gets their top
    let table = decode_model(&model, &e.map).unwrap();
    let mut broken = table.clone();
    let (q, top) = (0..216u64)
        .find_map(|k| {
            let p = index_to_profile(ProfileIndex(k), 3, 3).unwrap();
            let q = p.reverse_voter(0).unwrap();
            let top = p.voters()[0].top();
            (table.get(&TableKey::Profile(ProfileIndex(k))).unwrap() != top).then_some((q, top))
        })
        .unwrap();
    broken
        .set(TableKey::Profile(profile_to_index(&q).unwrap()), top)
        .unwrap();
    let report = verify_rule(&broken, &ScanConfig::default()).unwrap();
    let w = report.hwm_violation.expect("planted violation found");
    assert!(w.revalidate(&broken).is_ok());
}

#[test]
fn maximin_table_is_clean() {
    let maximin = rule_by_name("maximin", TieBreak::lexicographic(3)).unwrap();
    for n in 3..=4 {
        let table = RuleTable::from_rule(maximin.as_ref(), n, 3).unwrap();
        assert!(verify_rule(&table, &ScanConfig::default()).unwrap().is_clean());
    }
}

#[test]
fn proof_neighborhoods_are_unsat_and_need_every_leaf() {
    for (tree, vars) in [(build_odd_tree(4).unwrap(), 32), (build_even_tree(4).unwrap(), 36)] {
        let e = encode_proof_neighborhood(&tree, NeighborhoodStyle::Collapsed).unwrap();
        assert_eq!(e.formula.num_vars(), vars);
        assert!(e.formula.num_clauses() <= 500);
        assert_eq!(e.counts.condorcet, 4);
        assert!(solve(&e.formula).is_none());
        let units: Vec<Vec<i32>> = e
            .formula
            .clauses()
            .filter(|c| c.len() == 1)
            .map(<[i32]>::to_vec)
            .collect();
        assert_eq!(units.len(), 4);
        for unit in &units {
            let weaker = e.formula.without(|c| c == unit.as_slice());
            let model = solve(&weaker).expect("dropping a leaf unit leaves a model");
            let named = decode_named(&model, &e.map).unwrap();
            assert_eq!(named.len(), e.map.num_keys());
        }
        let expanded = encode_proof_neighborhood(&tree, NeighborhoodStyle::Expanded).unwrap();
        assert!(expanded.formula.num_vars() > vars);
        assert!(solve(&expanded.formula).is_none());
    }
}

#[test]
fn neighborhood_unsat_iff_tree_verifies() {
    let mut variants: Vec<(&str, ProofTree)> = vec![
        ("odd", build_odd_tree(4).unwrap()),
        ("even", build_even_tree(4).unwrap()),
        ("odd m=5", build_odd_tree(5).unwrap()),
        ("even padded", build_even_tree(4).unwrap().padded(1).unwrap()),
    ];
    let mut t = build_odd_tree(4).unwrap();
    t.leaves.remove(1);
    variants.push(("odd without P3 leaf", t));
    let mut t = build_even_tree(4).unwrap();
    t.leaves.remove(3);
    variants.push(("even without P6 leaf", t));
    let mut t = build_odd_tree(4).unwrap();
    t.edges.retain(|e| e.to != "P6");
    t.profiles.retain(|(n, _)| n != "P6");
    t.leaves.retain(|l| l.profile != "P6");
    variants.push(("odd without the P4->P6 branch", t));
    let mut t = build_odd_tree(4).unwrap();
    t.edges.retain(|e| e.to != "P2");
    t.profiles.retain(|(n, _)| n != "P2");
    t.leaves.retain(|l| l.profile != "P2");
    variants.push(("odd without the P1->P2 branch", t));

    let mut failing = 0;
    for (name, tree) in &variants {
        let verified = verify_tree(tree).is_ok();
        failing += usize::from(!verified);
        let e = encode_proof_neighborhood(tree, NeighborhoodStyle::Collapsed).unwrap();
        assert_eq!(solve(&e.formula).is_none(), verified, "{name}");
    }
    assert!(failing >= 3);
}

#[test]
fn neighborhood_dimacs_is_stable() {
    let tree = build_odd_tree(4).unwrap();
    let a = dimacs_string(
        &encode_proof_neighborhood(&tree, NeighborhoodStyle::Collapsed)
            .unwrap()
            .formula,
    );
    let b = dimacs_string(
        &encode_proof_neighborhood(&tree, NeighborhoodStyle::Collapsed)
            .unwrap()
            .formula,
    );
    assert_eq!(a, b);
    assert!(a.starts_with("p cnf 32 "));
}

#[allow(clippy::needless_range_loop)]
/// Exact realizability by search over order-count vectors, pruning on
/// per-pair margin reachability.
fn realizable_by_counts(target: &MarginMatrix, k: usize) -> bool {
    let m = target.m();
    let orders = enumerate_orders(m).unwrap();
    let singles: Vec<MarginMatrix> = orders.iter().map(MarginMatrix::of_order).collect();
    fn go(t: &MarginMatrix, cur: &mut Vec<Vec<i32>>, left: usize, from: usize, singles: &[MarginMatrix]) -> bool {
        let m = t.m();
        let alts = |i: usize| Alternative(i as u8);
        for a in 0..m {
            for b in a + 1..m {
                let gap = t.get(alts(a), alts(b)) - cur[a][b];
                if gap.unsigned_abs() as usize > left || (gap.unsigned_abs() as usize + left) % 2 == 1 {
                    return false;
                }
            }
        }
        if left == 0 {
            return true;
        }
        for o in from..singles.len() {
            for a in 0..m {
                for b in 0..m {
                    cur[a][b] += singles[o].get(alts(a), alts(b));
                }
            }
            let ok = go(t, cur, left - 1, o, singles);
            for a in 0..m {
                for b in 0..m {
                    cur[a][b] -= singles[o].get(alts(a), alts(b));
                }
            }
            if ok {
                return true;
            }
        }
        false
    }
    go(target, &mut vec![vec![0; m]; m], k, 0, &singles)
}

fn candidates(m: usize, n: usize) -> Vec<MarginMatrix> {
    let values: Vec<i32> = (-(n as i32)..=n as i32).filter(|v| (v - n as i32) % 2 == 0).collect();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    let mut digits = vec![0usize; pairs.len()];
    loop {
        let mut grid = vec![vec![0i32; m]; m];
        for (d, &(a, b)) in digits.iter().zip(&pairs) {
            grid[a][b] = values[*d];
            grid[b][a] = -values[*d];
        }
        let key: Vec<String> = grid.iter().flatten().map(i32::to_string).collect();
        out.push(MarginMatrix::from_key(&key.join("_"), n).unwrap());
        let mut i = 0;
        while i < digits.len() {
            digits[i] += 1;
            if digits[i] < values.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == digits.len() {
            return out;
        }
    }
}

#[test]
fn c2_realizability_matches_count_search() {
    for (n, m) in [(1, 3), (2, 3), (3, 3), (4, 3), (5, 3), (2, 4), (3, 4)] {
        let layers = realizable_margins(n, m, 1_000_000).unwrap();
        let known: BTreeSet<MarginMatrix> = layers[n].iter().copied().collect();
        let mut realizable = 0;
        for t in candidates(m, n) {
            let by_search = realizable_by_counts(&t, n);
            assert_eq!(known.contains(&t), by_search, "n={n} m={m} {}", t.key());
            realizable += usize::from(by_search);
        }
        assert_eq!(realizable, known.len(), "n={n} m={m}");
    }
}

#[test]
fn c2_clauses_only_for_realizable_predecessors() {
    let (n, m) = (3, 3);
    let e = encode_full(n, m, EncodingMode::C2, &EncodeConfig::default()).unwrap();
    let orders = enumerate_orders(m).unwrap();
    let mut expected = 0;
    for k in 0..e.map.num_keys() {
        let t = *e.map.margin_key(k).unwrap();
        for o in &orders {
            let mut rest = t;
            rest.remove_vote(o);
            expected += usize::from(realizable_by_counts(&rest, n - 1)) * 3;
        }
    }
    assert_eq!(e.counts.hwm, expected);
}

#[test]
fn dimacs_and_model_round_trip() {
    let e = encode_full(2, 3, EncodingMode::Profile, &EncodeConfig::default()).unwrap();
    let text = dimacs_string(&e.formula);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(format!("p cnf 108 {}", e.counts.total()).as_str()));
    let parsed: Vec<Vec<i32>> = lines
        .map(|l| {
            let lits: Vec<i32> = l.split_whitespace().map(|t| t.parse().unwrap()).collect();
            assert_eq!(lits.last(), Some(&0));
            lits[..lits.len() - 1].to_vec()
        })
        .collect();
    let original: Vec<Vec<i32>> = e.formula.clauses().map(<[i32]>::to_vec).collect();
    assert_eq!(parsed, original);

    let model = solve(&e.formula).unwrap();
    assert_eq!(read_dimacs_model(&model.to_model_text(), 108).unwrap(), model);
    let sidecar = e.map.to_sidecar();
    assert_eq!(VariableMap::parse_sidecar(&sidecar).unwrap(), e.map);
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn any_assignment_survives_the_model_text(bits in proptest::collection::vec(proptest::option::of(any::<bool>()), 1..200)) {
            let a = Assignment(bits);
            let back = read_dimacs_model(&a.to_model_text(), a.0.len()).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
