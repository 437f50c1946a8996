use hwm_core::prefs::*;
use hwm_core::rules::*;
use hwm_core::tally::{condorcet_winner, margin_matrix};
use proptest::prelude::*;

const CONDORCET_RULES: &[&str] = &[
    "maximin",
    "black",
    "kemeny",
    "baldwin",
    "nanson",
    "dodgson",
    "schulze",
    "ranked-pairs",
    "condorcet",
];

fn profile(max_n: usize, ms: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Profile> {
    (ms, 1..=max_n).prop_flat_map(|(m, n)| {
        proptest::collection::vec(0..factorial(m), n).prop_map(move |ids| {
            let voters = ids
                .into_iter()
                .map(|i| LinearOrder::from_index(i, m).unwrap())
                .collect();
            Profile::new(m, voters).unwrap()
        })
    })
}

fn relabel(order: &LinearOrder, perm: &[Alternative]) -> LinearOrder {
    let ranking: Vec<Alternative> = order.ranking().map(|a| perm[a.id()]).collect();
    LinearOrder::from_ranking(&ranking).unwrap()
}

/// Kemeny score of `ranking`, counted pair by pair from the ballots.
fn agreement(profile: &Profile, ranking: &LinearOrder) -> usize {
    let m = profile.m();
    let mut total = 0;
    for v in profile.voters() {
        for a in 0..m {
            for b in 0..m {
                let (a, b) = (Alternative(a as u8), Alternative(b as u8));
                if a != b && ranking.prefers(a, b) && v.prefers(a, b) {
                    total += 1;
                }
            }
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn profile_index_round_trip(p in profile(4, 2..=4)) {
        let ix = profile_to_index(&p).unwrap();
        prop_assert!(ix.0 < profile_count(p.n(), p.m()).unwrap());
        prop_assert_eq!(index_to_profile(ix, p.n(), p.m()).unwrap(), p);
    }

    #[test]
    fn reversal_is_an_involution(p in profile(6, 2..=6), i in 0usize..6) {
        let i = i % p.n();
        let o = p.voters()[i];
        prop_assert_eq!(o.reverse().reverse(), o);
        prop_assert_eq!(p.reverse_voter(i).unwrap().reverse_voter(i).unwrap(), p);
    }

    #[test]
    fn padding_keeps_margins_and_the_condorcet_winner(p in profile(9, 2..=6), k in 0usize..720) {
        let o = LinearOrder::from_index(k % factorial(p.m()), p.m()).unwrap();
        let q = p.pad(o).unwrap();
        prop_assert_eq!(q.n(), p.n() + 2);
        let (a, b) = (margin_matrix(&p), margin_matrix(&q));
        for x in a.alternatives() {
            for y in a.alternatives() {
                prop_assert_eq!(a.get(x, y), b.get(x, y));
            }
        }
        prop_assert_eq!(condorcet_winner(&p), condorcet_winner(&q));
    }

    #[test]
    fn anonymous_rules_ignore_voter_order(p in profile(7, 2..=5), seed in any::<u64>()) {
        let mut voters = p.voters().to_vec();
        // deterministic shuffle from the seed
        let mut s = seed;
        for i in (1..voters.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            voters.swap(i, (s >> 33) as usize % (i + 1));
        }
        let q = Profile::new(p.m(), voters).unwrap();
        for name in RULE_NAMES.iter().filter(|n| **n != "dictator") {
            let r = rule_by_name(name, TieBreak::lexicographic(p.m())).unwrap();
            prop_assert_eq!(r.winner(&p).unwrap(), r.winner(&q).unwrap(), "{}", name);
        }
        for name in SET_RULE_NAMES {
            let r = set_rule_by_name(name, TieBreak::lexicographic(p.m())).unwrap();
            prop_assert_eq!(r.winners(&p).unwrap(), r.winners(&q).unwrap(), "{}", name);
        }
    }

    #[test]
    fn tournament_solutions_are_neutral(p in profile(7, 2..=5), k in 0usize..120) {
        let m = p.m();
        let perm: Vec<Alternative> = LinearOrder::from_index(k % factorial(m), m).unwrap().ranking().collect();
        let voters = p.voters().iter().map(|o| relabel(o, &perm)).collect();
        let q = Profile::new(m, voters).unwrap();
        for name in SET_RULE_NAMES {
            let r = set_rule_by_name(name, TieBreak::lexicographic(m)).unwrap();
            let mut mapped = AltSet::empty();
            for a in r.winners(&p).unwrap().iter() {
                mapped.insert(perm[a.id()]);
            }
            prop_assert_eq!(mapped, r.winners(&q).unwrap(), "{}", name);
        }
        prop_assert_eq!(condorcet_winner(&p).map(|a| perm[a.id()]), condorcet_winner(&q));
    }

    #[test]
    fn condorcet_extensions_at_four_and_five(p in profile(9, 4..=5)) {
        if let Some(x) = condorcet_winner(&p) {
            for name in CONDORCET_RULES {
                let r = rule_by_name(name, TieBreak::lexicographic(p.m())).unwrap();
                prop_assert_eq!(r.winner(&p).unwrap(), x, "{}", name);
            }
            for name in SET_RULE_NAMES {
                let r = set_rule_by_name(name, TieBreak::lexicographic(p.m())).unwrap();
                prop_assert_eq!(r.winners(&p).unwrap(), AltSet::singleton(x), "{}", name);
            }
        }
    }

    #[test]
    fn kemeny_rankings_are_optimal(p in profile(7, 2..=4)) {
        let best = kemeny_rankings(&p).unwrap();
        let all = enumerate_orders(p.m()).unwrap();
        let top = all.iter().map(|o| agreement(&p, o)).max().unwrap();
        let brute: Vec<LinearOrder> = all.into_iter().filter(|o| agreement(&p, o) == top).collect();
        let mut got: Vec<usize> = best.iter().map(LinearOrder::index).collect();
        got.sort();
        let mut want: Vec<usize> = brute.iter().map(LinearOrder::index).collect();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn borda_matches_positional_scores(p in profile(8, 2..=5)) {
        let m = p.m();
        let mut score = vec![0usize; m];
        for v in p.voters() {
            for (pos, a) in v.ranking().enumerate() {
                score[a.id()] += m - 1 - pos;
            }
        }
        let best = *score.iter().max().unwrap();
        // lexicographic tie-break: lowest id among the tied
        let want = Alternative(score.iter().position(|&s| s == best).unwrap() as u8);
        let borda = rule_by_name("borda", TieBreak::lexicographic(m)).unwrap();
        prop_assert_eq!(borda.winner(&p).unwrap(), want);
    }
}

#[test]
fn condorcet_extensions_at_three_exhaustively() {
    for n in 1..=4 {
        let orders = enumerate_orders(3).unwrap();
        for ix in 0..profile_count(n, 3).unwrap() {
            let p = index_to_profile_with(ProfileIndex(ix), n, &orders).unwrap();
            let Some(x) = condorcet_winner(&p) else { continue };
            for name in CONDORCET_RULES {
                let r = rule_by_name(name, TieBreak::lexicographic(3)).unwrap();
                assert_eq!(r.winner(&p).unwrap(), x, "{name} {ix}");
            }
            for name in SET_RULE_NAMES {
                let r = set_rule_by_name(name, TieBreak::lexicographic(3)).unwrap();
                assert_eq!(r.winners(&p).unwrap(), AltSet::singleton(x), "{name} {ix}");
            }
        }
    }
}

#[test]
fn condorcet_domain_and_top_cycle_at_three_voters() {
    let orders = enumerate_orders(3).unwrap();
    let top_cycle = set_rule_by_name("top-cycle", TieBreak::lexicographic(3)).unwrap();
    let (mut with_winner, mut full_cycle) = (0, 0);
    for ix in 0..216 {
        let p = index_to_profile_with(ProfileIndex(ix), 3, &orders).unwrap();
        with_winner += usize::from(condorcet_winner(&p).is_some());
        full_cycle += usize::from(top_cycle.winners(&p).unwrap() == AltSet::full(3));
    }
    assert_eq!(with_winner, 204);
    // odd n with three alternatives: no winner means a majority 3-cycle
    assert_eq!(full_cycle, 12);
}
