use crate::error::{Error, Result};
use crate::prefs::{enumerate_orders, Alternative, LinearOrder, Profile};
use crate::tally::{margin_matrix, MarginMatrix};

use super::{TieBreak, VotingRule};

const MAX_KEMENY_M: usize = 7;

/// Total pairwise agreement of `ranking` with the profile, in margin units.
fn agreement(mm: &MarginMatrix, ranking: &LinearOrder) -> i64 {
    let m = ranking.m();
    let mut score = 0i64;
    for p in 0..m {
        for q in p + 1..m {
            score += i64::from(mm.get(ranking.at(p), ranking.at(q)));
        }
    }
    score
}

/// All rankings of maximal agreement, in lexicographic order.
pub fn kemeny_rankings(profile: &Profile) -> Result<Vec<LinearOrder>> {
    if profile.m() > MAX_KEMENY_M {
        return Err(Error::MTooLargeForExactKemeny(profile.m()));
    }
    let mm = margin_matrix(profile);
    let scored: Vec<(LinearOrder, i64)> = enumerate_orders(profile.m())?
        .into_iter()
        .map(|r| (r, agreement(&mm, &r)))
        .collect();
    let best = scored.iter().map(|&(_, s)| s).max().expect("m >= 1");
    Ok(scored.into_iter().filter(|&(_, s)| s == best).map(|(r, _)| r).collect())
}

/// Top of the optimal ranking that comes first when rankings are compared
/// position by position under the tie-break priority.
pub fn kemeny_winner(profile: &Profile, tiebreak: &TieBreak) -> Result<Alternative> {
    tiebreak.check(profile)?;
    let rankings = kemeny_rankings(profile)?;
    let key = |r: &LinearOrder| -> Vec<usize> { r.ranking().map(|a| tiebreak.priority().position(a)).collect() };
    let first = rankings
        .iter()
        .min_by_key(|r| key(r))
        .expect("at least one optimal ranking");
    Ok(first.top())
}

pub struct Kemeny(pub TieBreak);

impl VotingRule for Kemeny {
    fn name(&self) -> String {
        "kemeny".into()
    }
    fn winner(&self, profile: &Profile) -> Result<Alternative> {
        kemeny_winner(profile, &self.0)
    }
}
