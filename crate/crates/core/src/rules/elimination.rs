//! Iterated Borda elimination.

use crate::error::Result;
use crate::prefs::{Alternative, Profile};
use crate::tally::{margin_matrix, MarginMatrix};

use super::{AltSet, TieBreak, VotingRule};

/// Borda score of `a` in the election restricted to `remaining`, doubled to
/// stay integral: `sum_b (n + margin(a, b))`.
fn restricted_borda(mm: &MarginMatrix, remaining: AltSet, a: Alternative) -> i64 {
    remaining
        .iter()
        .filter(|&b| b != a)
        .map(|b| mm.n() as i64 + i64::from(mm.get(a, b)))
        .sum()
}

/// Eliminates the lowest Borda score one at a time; among tied lowest, the
/// tie-break's lowest-priority alternative goes first.
pub fn baldwin_winner(profile: &Profile, tiebreak: &TieBreak) -> Result<Alternative> {
    tiebreak.check(profile)?;
    let mm = margin_matrix(profile);
    let mut remaining = AltSet::full(profile.m());
    while remaining.len() > 1 {
        let scores: Vec<(Alternative, i64)> = remaining
            .iter()
            .map(|a| (a, restricted_borda(&mm, remaining, a)))
            .collect();
        let low = scores.iter().map(|&(_, s)| s).min().expect("nonempty");
        let out = tiebreak.last(scores.iter().filter(|&&(_, s)| s == low).map(|&(a, _)| a));
        remaining.remove(out);
    }
    Ok(remaining.iter().next().expect("one survivor"))
}

/// Eliminates every alternative scoring strictly below the average each round.
pub fn nanson_winner(profile: &Profile, tiebreak: &TieBreak) -> Result<Alternative> {
    tiebreak.check(profile)?;
    let mm = margin_matrix(profile);
    let mut remaining = AltSet::full(profile.m());
    while remaining.len() > 1 {
        let k = remaining.len() as i64;
        let scores: Vec<(Alternative, i64)> = remaining
            .iter()
            .map(|a| (a, restricted_borda(&mm, remaining, a)))
            .collect();
        let total: i64 = scores.iter().map(|&(_, s)| s).sum();
        let below: Vec<Alternative> = scores
            .iter()
            .filter(|&&(_, s)| s * k < total)
            .map(|&(a, _)| a)
            .collect();
        if below.is_empty() {
            break;
        }
        for a in below {
            remaining.remove(a);
        }
    }
    Ok(tiebreak.pick(remaining.iter()))
}

pub struct Baldwin(pub TieBreak);

impl VotingRule for Baldwin {
    fn name(&self) -> String {
        "baldwin".into()
    }
    fn winner(&self, profile: &Profile) -> Result<Alternative> {
        baldwin_winner(profile, &self.0)
    }
}

pub struct Nanson(pub TieBreak);

impl VotingRule for Nanson {
    fn name(&self) -> String {
        "nanson".into()
    }
    fn winner(&self, profile: &Profile) -> Result<Alternative> {
        nanson_winner(profile, &self.0)
    }
}
