//! Rules computed from the margin matrix alone.

use crate::error::Result;
use crate::prefs::{Alternative, Profile, MAX_ALTERNATIVES};
use crate::tally::{margin_matrix, MarginMatrix};

use super::{scoring_winner, AltSet, ScoreVector, SetRule, TieBreak, VotingRule};

/// `min_{b != a} margin(a, b)` for every alternative.
pub fn maximin_scores(mm: &MarginMatrix) -> Vec<i32> {
    mm.alternatives()
        .map(|a| {
            mm.alternatives()
                .filter(|&b| b != a)
                .map(|b| mm.get(a, b))
                .min()
                .unwrap_or(0)
        })
        .collect()
}

pub fn maximin_winner(profile: &Profile, tiebreak: &TieBreak) -> Result<Alternative> {
    tiebreak.check(profile)?;
    let mm = margin_matrix(profile);
    let scores = maximin_scores(&mm);
    let best = *scores.iter().max().expect("m >= 1");
    Ok(tiebreak.pick(mm.alternatives().filter(|a| scores[a.id()] == best)))
}

/// Condorcet winner if there is one, else the Borda winner.
pub fn black_winner(profile: &Profile, tiebreak: &TieBreak) -> Result<Alternative> {
    tiebreak.check(profile)?;
    match margin_matrix(profile).condorcet_winner() {
        Some(x) => Ok(x),
        None => scoring_winner(profile, &ScoreVector::borda(profile.m()), tiebreak),
    }
}

/// Widest-path strengths over positive margins.
fn schulze_strengths(mm: &MarginMatrix) -> [[i32; MAX_ALTERNATIVES]; MAX_ALTERNATIVES] {
    let m = mm.m();
    let mut p = [[0i32; MAX_ALTERNATIVES]; MAX_ALTERNATIVES];
    for a in mm.alternatives() {
        for b in mm.alternatives() {
            if a != b {
                p[a.id()][b.id()] = mm.get(a, b).max(0);
            }
        }
    }
    for k in 0..m {
        for i in (0..m).filter(|&i| i != k) {
            for j in (0..m).filter(|&j| j != k && j != i) {
                let via = p[i][k].min(p[k][j]);
                if via > p[i][j] {
                    p[i][j] = via;
                }
            }
        }
    }
    p
}

pub fn schulze_winner(profile: &Profile, tiebreak: &TieBreak) -> Result<Alternative> {
    tiebreak.check(profile)?;
    let mm = margin_matrix(profile);
    let p = schulze_strengths(&mm);
    let unbeaten = mm
        .alternatives()
        .filter(|&a| mm.alternatives().all(|b| p[a.id()][b.id()] >= p[b.id()][a.id()]));
    Ok(tiebreak.pick(unbeaten))
}

pub fn ranked_pairs_winner(profile: &Profile, tiebreak: &TieBreak) -> Result<Alternative> {
    tiebreak.check(profile)?;
    let mm = margin_matrix(profile);
    let m = mm.m();
    let rank = |a: Alternative| tiebreak.priority().position(a);
    let mut pairs: Vec<(Alternative, Alternative)> = mm
        .alternatives()
        .flat_map(|a| mm.alternatives().map(move |b| (a, b)))
        .filter(|&(a, b)| mm.get(a, b) > 0)
        .collect();
    pairs.sort_by_key(|&(a, b)| (std::cmp::Reverse(mm.get(a, b)), rank(a), rank(b)));

    let mut locked = [[false; MAX_ALTERNATIVES]; MAX_ALTERNATIVES];
    for (w, l) in pairs {
        if !reaches(&locked, m, l.id(), w.id()) {
            locked[w.id()][l.id()] = true;
        }
    }
    let sources = mm.alternatives().filter(|&a| (0..m).all(|b| !locked[b][a.id()]));
    Ok(tiebreak.pick(sources))
}

fn reaches(edges: &[[bool; MAX_ALTERNATIVES]; MAX_ALTERNATIVES], m: usize, from: usize, to: usize) -> bool {
    let mut seen = [false; MAX_ALTERNATIVES];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(x) = stack.pop() {
        if x == to {
            return true;
        }
        for y in 0..m {
            if edges[x][y] && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    false
}

/// Alternatives with the best wins-minus-losses record.
pub fn copeland_set(profile: &Profile) -> AltSet {
    let mm = margin_matrix(profile);
    let score = |a: Alternative| -> i32 { mm.alternatives().map(|b| mm.get(a, b).signum()).sum() };
    let best = mm.alternatives().map(score).max().expect("m >= 1");
    mm.alternatives().filter(|&a| score(a) == best).collect()
}

/// `a` covers `b` iff `a` beats `b` and beats everything `b` beats.
fn covers(mm: &MarginMatrix, a: Alternative, b: Alternative) -> bool {
    mm.beats(a, b) && mm.alternatives().all(|c| !mm.beats(b, c) || mm.beats(a, c))
}

pub fn uncovered_set(profile: &Profile) -> AltSet {
    let mm = margin_matrix(profile);
    mm.alternatives()
        .filter(|&b| !mm.alternatives().any(|a| covers(&mm, a, b)))
        .collect()
}

/// Smallest nonempty set whose members all strictly beat every non-member.
#[allow(clippy::needless_range_loop)]
pub fn top_cycle(profile: &Profile) -> AltSet {
    let mm = margin_matrix(profile);
    let m = mm.m();
    // Reachability over the weak majority relation (margin >= 0).
    let mut reach = [[false; MAX_ALTERNATIVES]; MAX_ALTERNATIVES];
    for a in 0..m {
        for b in 0..m {
            reach[a][b] = a == b || mm.get(Alternative(a as u8), Alternative(b as u8)) >= 0;
        }
    }
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    mm.alternatives().filter(|a| (0..m).all(|b| reach[a.id()][b])).collect()
}

pub struct Maximin(pub TieBreak);

impl VotingRule for Maximin {
    fn name(&self) -> String {
        "maximin".into()
    }
    fn winner(&self, profile: &Profile) -> Result<Alternative> {
        maximin_winner(profile, &self.0)
    }
}

pub struct Black(pub TieBreak);

impl VotingRule for Black {
    fn name(&self) -> String {
        "black".into()
    }
    fn winner(&self, profile: &Profile) -> Result<Alternative> {
        black_winner(profile, &self.0)
    }
}

pub struct Schulze(pub TieBreak);

impl VotingRule for Schulze {
    fn name(&self) -> String {
        "schulze".into()
    }
    fn winner(&self, profile: &Profile) -> Result<Alternative> {
        schulze_winner(profile, &self.0)
    }
}

pub struct RankedPairs(pub TieBreak);

impl VotingRule for RankedPairs {
    fn name(&self) -> String {
        "ranked-pairs".into()
    }
    fn winner(&self, profile: &Profile) -> Result<Alternative> {
        ranked_pairs_winner(profile, &self.0)
    }
}

/// The Condorcet winner, falling back to the tie-break's top choice when
/// there is none. Meant for domains restricted to Condorcet profiles.
pub struct CondorcetRule(pub TieBreak);

impl VotingRule for CondorcetRule {
    fn name(&self) -> String {
        "condorcet".into()
    }
    fn winner(&self, profile: &Profile) -> Result<Alternative> {
        self.0.check(profile)?;
        Ok(margin_matrix(profile)
            .condorcet_winner()
            .unwrap_or_else(|| self.0.priority().top()))
    }
}

pub struct Copeland;

impl SetRule for Copeland {
    fn name(&self) -> String {
        "copeland".into()
    }
    fn winners(&self, profile: &Profile) -> Result<AltSet> {
        Ok(copeland_set(profile))
    }
}

pub struct UncoveredSet;

impl SetRule for UncoveredSet {
    fn name(&self) -> String {
        "uncovered".into()
    }
    fn winners(&self, profile: &Profile) -> Result<AltSet> {
        Ok(uncovered_set(profile))
    }
}

pub struct TopCycle;

impl SetRule for TopCycle {
    fn name(&self) -> String {
        "top-cycle".into()
    }
    fn winners(&self, profile: &Profile) -> Result<AltSet> {
        Ok(top_cycle(profile))
    }
}
