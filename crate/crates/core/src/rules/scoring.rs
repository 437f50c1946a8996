use crate::error::{Error, Result};
use crate::prefs::{Alternative, Profile};

use super::{TieBreak, VotingRule};

/// Points per rank position, best position first; weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreVector(Vec<i64>);

impl ScoreVector {
    pub fn new(points: Vec<i64>) -> Result<ScoreVector> {
        if points.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse {
                line: 0,
                message: format!("score vector {points:?} is not weakly decreasing"),
            });
        }
        Ok(ScoreVector(points))
    }

    pub fn borda(m: usize) -> ScoreVector {
        ScoreVector((0..m as i64).rev().collect())
    }

    pub fn plurality(m: usize) -> ScoreVector {
        ScoreVector((0..m).map(|p| i64::from(p == 0)).collect())
    }

    pub fn points(&self) -> &[i64] {
        &self.0
    }

    pub fn totals(&self, profile: &Profile) -> Vec<i64> {
        let mut totals = vec![0; profile.m()];
        for vote in profile.voters() {
            for (pos, a) in vote.ranking().enumerate() {
                totals[a.id()] += self.0[pos];
            }
        }
        totals
    }
}

pub fn scoring_winner(profile: &Profile, vector: &ScoreVector, tiebreak: &TieBreak) -> Result<Alternative> {
    tiebreak.check(profile)?;
    if vector.0.len() != profile.m() {
        return Err(Error::AlternativeCountMismatch {
            expected: profile.m(),
            found: vector.0.len(),
        });
    }
    let totals = vector.totals(profile);
    let best = *totals.iter().max().expect("m >= 1");
    Ok(tiebreak.pick(
        (0..profile.m())
            .filter(|&a| totals[a] == best)
            .map(|a| Alternative(a as u8)),
    ))
}

pub struct Scoring {
    vector: ScoreVector,
    tiebreak: TieBreak,
}

impl Scoring {
    pub fn new(vector: ScoreVector, tiebreak: TieBreak) -> Scoring {
        Scoring { vector, tiebreak }
    }
}

impl VotingRule for Scoring {
    fn name(&self) -> String {
        let m = self.vector.0.len();
        if self.vector == ScoreVector::borda(m) {
            "borda".into()
        } else if self.vector == ScoreVector::plurality(m) {
            "plurality".into()
        } else {
            format!("scoring{:?}", self.vector.0)
        }
    }

    fn winner(&self, profile: &Profile) -> Result<Alternative> {
        scoring_winner(profile, &self.vector, &self.tiebreak)
    }
}

/// The top choice of one fixed voter.
pub struct Dictatorship {
    pub voter: usize,
}

impl VotingRule for Dictatorship {
    fn name(&self) -> String {
        format!("dictator{}", self.voter)
    }

    fn winner(&self, profile: &Profile) -> Result<Alternative> {
        Ok(profile.voter(self.voter)?.top())
    }
}
