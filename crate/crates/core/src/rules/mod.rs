//! The voting-rule suite.
//!
//! Every resolute rule implements [`VotingRule`] and resolves ties through a
//! fixed [`TieBreak`] priority order; set-valued rules implement [`SetRule`].

mod dodgson;
mod elimination;
mod kemeny;
mod majority;
mod scoring;
mod table;

use std::fmt;

pub use dodgson::{dodgson_scores, dodgson_scores_with_budget, dodgson_winner, Dodgson, DEFAULT_DODGSON_BUDGET};
pub use elimination::{baldwin_winner, nanson_winner, Baldwin, Nanson};
pub use kemeny::{kemeny_rankings, kemeny_winner, Kemeny};
pub use majority::{
    black_winner, copeland_set, maximin_scores, maximin_winner, ranked_pairs_winner, schulze_winner, top_cycle,
    uncovered_set, Black, CondorcetRule, Copeland, Maximin, RankedPairs, Schulze, TopCycle, UncoveredSet,
};
pub use scoring::{scoring_winner, Dictatorship, ScoreVector, Scoring};
pub use table::{rule_table_lookup, RuleTable, TableKey, TableMode};

use crate::error::{Error, Result};
use crate::prefs::{Alternative, Labels, LinearOrder, Profile};

/// A resolute voting rule.
pub trait VotingRule: Sync {
    fn name(&self) -> String;
    fn winner(&self, profile: &Profile) -> Result<Alternative>;
}

/// A set-valued (irresolute) voting rule.
pub trait SetRule: Sync {
    fn name(&self) -> String;
    fn winners(&self, profile: &Profile) -> Result<AltSet>;
}

impl<R: VotingRule + ?Sized> VotingRule for &R {
    fn name(&self) -> String {
        (**self).name()
    }
    fn winner(&self, profile: &Profile) -> Result<Alternative> {
        (**self).winner(profile)
    }
}

impl<R: VotingRule + ?Sized> VotingRule for Box<R> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn winner(&self, profile: &Profile) -> Result<Alternative> {
        (**self).winner(profile)
    }
}

impl<R: SetRule + ?Sized> SetRule for &R {
    fn name(&self) -> String {
        (**self).name()
    }
    fn winners(&self, profile: &Profile) -> Result<AltSet> {
        (**self).winners(profile)
    }
}

impl<R: SetRule + ?Sized> SetRule for Box<R> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn winners(&self, profile: &Profile) -> Result<AltSet> {
        (**self).winners(profile)
    }
}

/// A resolute rule viewed as a set-valued rule returning singletons.
pub struct Singleton<R>(pub R);

impl<R: VotingRule> SetRule for Singleton<R> {
    fn name(&self) -> String {
        self.0.name()
    }
    fn winners(&self, profile: &Profile) -> Result<AltSet> {
        Ok(AltSet::singleton(self.0.winner(profile)?))
    }
}

/// A rule given by a closure; handy for fixtures.
pub struct FnRule<F> {
    name: String,
    f: F,
}

impl<F> FnRule<F>
where
    F: Fn(&Profile) -> Result<Alternative> + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnRule { name: name.into(), f }
    }
}

impl<F> VotingRule for FnRule<F>
where
    F: Fn(&Profile) -> Result<Alternative> + Sync,
{
    fn name(&self) -> String {
        self.name.clone()
    }
    fn winner(&self, profile: &Profile) -> Result<Alternative> {
        (self.f)(profile)
    }
}

/// A set-valued rule given by a closure.
pub struct FnSetRule<F> {
    name: String,
    f: F,
}

impl<F> FnSetRule<F>
where
    F: Fn(&Profile) -> Result<AltSet> + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnSetRule { name: name.into(), f }
    }
}

impl<F> SetRule for FnSetRule<F>
where
    F: Fn(&Profile) -> Result<AltSet> + Sync,
{
    fn name(&self) -> String {
        self.name.clone()
    }
    fn winners(&self, profile: &Profile) -> Result<AltSet> {
        (self.f)(profile)
    }
}

/// A set of alternatives, stored as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AltSet(u16);

impl AltSet {
    pub fn empty() -> AltSet {
        AltSet(0)
    }

    pub fn full(m: usize) -> AltSet {
        AltSet(((1u32 << m) - 1) as u16)
    }

    pub fn singleton(a: Alternative) -> AltSet {
        AltSet(1 << a.id())
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn contains(self, a: Alternative) -> bool {
        self.0 & (1 << a.id()) != 0
    }

    pub fn insert(&mut self, a: Alternative) {
        self.0 |= 1 << a.id();
    }

    pub fn remove(&mut self, a: Alternative) {
        self.0 &= !(1 << a.id());
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: AltSet) -> AltSet {
        AltSet(self.0 | other.0)
    }

    pub fn intersection(self, other: AltSet) -> AltSet {
        AltSet(self.0 & other.0)
    }

    pub fn difference(self, other: AltSet) -> AltSet {
        AltSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: AltSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Alternative> {
        (0..16u8).filter(move |i| self.0 & (1 << i) != 0).map(Alternative)
    }

    /// Most preferred member under `order`.
    pub fn best(self, order: &LinearOrder) -> Option<Alternative> {
        order.ranking().find(|&a| self.contains(a))
    }

    /// Least preferred member under `order`.
    pub fn worst(self, order: &LinearOrder) -> Option<Alternative> {
        order.ranking().rev().find(|&a| self.contains(a))
    }

    /// `{x,y,z}` with labels in id order.
    pub fn format(self, labels: &Labels) -> String {
        let names: Vec<&str> = self.iter().map(|a| labels.name(a)).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn parse(text: &str, labels: &Labels) -> Result<AltSet> {
        let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut set = AltSet::empty();
        for token in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            set.insert(labels.lookup(token)?);
        }
        Ok(set)
    }
}

impl FromIterator<Alternative> for AltSet {
    fn from_iter<I: IntoIterator<Item = Alternative>>(iter: I) -> Self {
        let mut s = AltSet::empty();
        for a in iter {
            s.insert(a);
        }
        s
    }
}

impl fmt::Debug for AltSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.0)).finish()
    }
}

/// A fixed priority order resolving every tie.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TieBreak {
    priority: LinearOrder,
}

impl TieBreak {
    pub fn new(priority: LinearOrder) -> TieBreak {
        TieBreak { priority }
    }

    /// Prefers lower alternative ids.
    pub fn lexicographic(m: usize) -> TieBreak {
        TieBreak::new(LinearOrder::identity(m))
    }

    pub fn priority(&self) -> &LinearOrder {
        &self.priority
    }

    /// Highest-priority member of `candidates`.
    pub fn pick(&self, candidates: impl IntoIterator<Item = Alternative>) -> Alternative {
        candidates
            .into_iter()
            .min_by_key(|&a| self.priority.position(a))
            .expect("tie-break over an empty candidate set")
    }

    /// Lowest-priority member of `candidates`.
    pub fn last(&self, candidates: impl IntoIterator<Item = Alternative>) -> Alternative {
        candidates
            .into_iter()
            .max_by_key(|&a| self.priority.position(a))
            .expect("tie-break over an empty candidate set")
    }

    fn check(&self, profile: &Profile) -> Result<()> {
        if self.priority.m() != profile.m() {
            return Err(Error::AlternativeCountMismatch {
                expected: profile.m(),
                found: self.priority.m(),
            });
        }
        Ok(())
    }
}

/// Names accepted by [`rule_by_name`].
pub const RULE_NAMES: &[&str] = &[
    "borda",
    "plurality",
    "maximin",
    "black",
    "kemeny",
    "baldwin",
    "nanson",
    "dodgson",
    "schulze",
    "ranked-pairs",
    "condorcet",
    "dictator",
];

/// Names accepted by [`set_rule_by_name`] besides the resolute ones.
pub const SET_RULE_NAMES: &[&str] = &["copeland", "uncovered", "top-cycle"];

pub fn rule_by_name(name: &str, tiebreak: TieBreak) -> Result<Box<dyn VotingRule>> {
    let m = tiebreak.priority().m();
    Ok(match name {
        "borda" => Box::new(Scoring::new(ScoreVector::borda(m), tiebreak)),
        "plurality" => Box::new(Scoring::new(ScoreVector::plurality(m), tiebreak)),
        "maximin" => Box::new(Maximin(tiebreak)),
        "black" => Box::new(Black(tiebreak)),
        "kemeny" => Box::new(Kemeny(tiebreak)),
        "baldwin" => Box::new(Baldwin(tiebreak)),
        "nanson" => Box::new(Nanson(tiebreak)),
        "dodgson" => Box::new(Dodgson::new(tiebreak)),
        "schulze" => Box::new(Schulze(tiebreak)),
        "ranked-pairs" => Box::new(RankedPairs(tiebreak)),
        "condorcet" => Box::new(CondorcetRule(tiebreak)),
        "dictator" => Box::new(Dictatorship { voter: 0 }),
        other => return Err(Error::UnknownLabel(format!("rule `{other}`"))),
    })
}

/// Set-valued rules by name; resolute rule names are lifted to singletons.
pub fn set_rule_by_name(name: &str, tiebreak: TieBreak) -> Result<Box<dyn SetRule>> {
    Ok(match name {
        "copeland" => Box::new(Copeland),
        "uncovered" => Box::new(UncoveredSet),
        "top-cycle" => Box::new(TopCycle),
        other => Box::new(Singleton(rule_by_name(other, tiebreak)?)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn altset_basics() {
        let l = Labels::standard(4);
        let s = AltSet::parse("{a,c}", &l).unwrap();
        assert_eq!(s.format(&l), "{a,c}");
        assert_eq!(s.len(), 2);
        let o = LinearOrder::from_ids(&[3, 2, 1, 0]);
        assert_eq!(s.best(&o), Some(Alternative(2)));
        assert_eq!(s.worst(&o), Some(Alternative(0)));
        assert!(s.is_subset(AltSet::full(4)));
        assert_eq!(AltSet::full(4).difference(s).format(&l), "{b,d}");
    }

    #[test]
    fn tiebreak_priority() {
        let t = TieBreak::new(LinearOrder::from_ids(&[2, 0, 1]));
        assert_eq!(t.pick([Alternative(0), Alternative(1)]), Alternative(0));
        assert_eq!(t.pick([Alternative(1), Alternative(2)]), Alternative(2));
        assert_eq!(t.last([Alternative(0), Alternative(2)]), Alternative(0));
    }
}
