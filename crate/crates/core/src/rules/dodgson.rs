//! Dodgson scores.
//!
//! Only swaps that move `x` upward change any of `x`'s pairwise contests, so
//! the score of `x` is the cheapest way to raise `x` in some voters' orders
//! until every rival's deficit is covered. Voters with identical orders are
//! interchangeable; for a group of `c` such voters the choice is a
//! non-increasing vector `r_1 >= r_2 >= ...` where `r_j` voters raise `x` past
//! its `j`-th nearest superior. The search runs over groups with memoisation
//! on the remaining deficit vector.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::prefs::{Alternative, Profile};
use crate::tally::margin_matrix;

use super::{TieBreak, VotingRule};

pub const DEFAULT_DODGSON_BUDGET: u64 = 5_000_000;
const MAX_DODGSON_M: usize = 6;
const INFEASIBLE: u32 = u32::MAX;

struct Group {
    count: u16,
    // indices into the rival list, nearest superior first
    above: Vec<usize>,
}

struct Search {
    groups: Vec<Group>,
    memo: HashMap<(usize, Vec<u16>), u32>,
    nodes: u64,
    budget: u64,
}

impl Search {
    fn solve(&mut self, g: usize, deficits: &[u16]) -> Result<u32> {
        if deficits.iter().all(|&d| d == 0) {
            return Ok(0);
        }
        if g == self.groups.len() {
            return Ok(INFEASIBLE);
        }
        if let Some(&v) = self.memo.get(&(g, deficits.to_vec())) {
            return Ok(v);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
                detail: "Dodgson deficit search".into(),
            });
        }
        let mut best = INFEASIBLE;
        let mut work = deficits.to_vec();
        let prev = self.groups[g].count;
        self.choose(g, 0, prev, 0, &mut work, &mut best)?;
        self.memo.insert((g, deficits.to_vec()), best);
        Ok(best)
    }

    /// Picks `r_{j+1}` for group `g` given `r_j = prev`.
    fn choose(&mut self, g: usize, j: usize, prev: u16, cost: u32, def: &mut Vec<u16>, best: &mut u32) -> Result<()> {
        let above_len = self.groups[g].above.len();
        if j == above_len || prev == 0 {
            let rest = self.solve(g + 1, def)?;
            if rest != INFEASIBLE {
                *best = (*best).min(cost + rest);
            }
            return Ok(());
        }
        // Raising further than any deeper rival still needs is never cheaper.
        let need = self.groups[g].above[j..].iter().map(|&k| def[k]).max().unwrap_or(0);
        let hi = prev.min(need);
        let target = self.groups[g].above[j];
        let original = def[target];
        for r in 0..=hi {
            def[target] = original.saturating_sub(r);
            if r == 0 {
                let rest = self.solve(g + 1, def)?;
                if rest != INFEASIBLE {
                    *best = (*best).min(cost + rest);
                }
            } else {
                self.choose(g, j + 1, r, cost + u32::from(r), def, best)?;
            }
        }
        def[target] = original;
        Ok(())
    }
}

/// Minimum number of adjacent swaps making each alternative the Condorcet
/// winner, indexed by alternative id.
pub fn dodgson_scores(profile: &Profile) -> Result<Vec<u32>> {
    dodgson_scores_with_budget(profile, DEFAULT_DODGSON_BUDGET)
}

pub fn dodgson_scores_with_budget(profile: &Profile, budget: u64) -> Result<Vec<u32>> {
    if profile.m() > MAX_DODGSON_M {
        return Err(Error::MTooLarge(profile.m(), MAX_DODGSON_M));
    }
    let mm = margin_matrix(profile);
    let counts = profile.order_counts();
    let mut scores = Vec::with_capacity(profile.m());
    for x in mm.alternatives() {
        let rivals: Vec<Alternative> = mm.alternatives().filter(|&y| y != x).collect();
        let deficits: Vec<u16> = rivals
            .iter()
            .map(|&y| {
                let margin = mm.get(x, y);
                if margin > 0 {
                    0
                } else {
                    (-margin / 2 + 1) as u16
                }
            })
            .collect();
        let groups = counts
            .iter()
            .filter(|(o, _)| o.position(x) > 0)
            .map(|&(o, c)| Group {
                count: c as u16,
                above: (0..o.position(x))
                    .rev()
                    .map(|p| rivals.iter().position(|&y| y == o.at(p)).expect("rival"))
                    .collect(),
            })
            .collect();
        let mut search = Search {
            groups,
            memo: HashMap::new(),
            nodes: 0,
            budget,
        };
        let score = search.solve(0, &deficits)?;
        debug_assert_ne!(score, INFEASIBLE);
        scores.push(score);
    }
    Ok(scores)
}

pub fn dodgson_winner(profile: &Profile, tiebreak: &TieBreak) -> Result<Alternative> {
    tiebreak.check(profile)?;
    let scores = dodgson_scores(profile)?;
    let best = *scores.iter().min().expect("m >= 1");
    Ok(tiebreak.pick(
        (0..profile.m())
            .filter(|&a| scores[a] == best)
            .map(|a| Alternative(a as u8)),
    ))
}

pub struct Dodgson {
    tiebreak: TieBreak,
}

impl Dodgson {
    pub fn new(tiebreak: TieBreak) -> Dodgson {
        Dodgson { tiebreak }
    }
}

impl VotingRule for Dodgson {
    fn name(&self) -> String {
        "dodgson".into()
    }
    fn winner(&self, profile: &Profile) -> Result<Alternative> {
        dodgson_winner(profile, &self.tiebreak)
    }
}
