//! Checkers and witness searches for half-way monotonicity, the strong
//! reversal paradox, participation, the optimistic and pessimistic set-valued
//! variants, and plain manipulability.
//!
//! Exhaustive scans walk profiles in ascending [`ProfileIndex`] order and
//! voters in ascending position, so the first witness reported is the same
//! regardless of how many workers run the scan. Every witness is re-validated
//! by recomputing both outcomes before it is returned.

use std::collections::BTreeMap;

use serde_json::json;

use crate::error::{Error, Result};
use crate::prefs::{
    enumerate_orders, index_to_profile_with, profile_count, Alternative, Labels, LinearOrder, Profile, ProfileIndex,
};
use crate::rules::{AltSet, SetRule, VotingRule};
use crate::scan::{scan_indices, ScanConfig, ScanOutcome};
use crate::tally::condorcet_winner;

/// A voter who obtains a strictly better outcome by reporting the reverse of
/// their truthful order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversalWitness {
    /// Profile with the voter's truthful vote.
    pub profile: Profile,
    pub voter: usize,
    pub winner_before: Alternative,
    pub winner_after: Alternative,
}

impl ReversalWitness {
    pub fn truthful_order(&self) -> LinearOrder {
        self.profile.voters()[self.voter]
    }

    pub fn reversed_profile(&self) -> Result<Profile> {
        self.profile.reverse_voter(self.voter)
    }

    /// The voter's top alternative wins after the reversal.
    pub fn is_strong(&self) -> bool {
        self.winner_after == self.truthful_order().top()
    }

    /// Recomputes both winners and the preference between them.
    pub fn revalidate(&self, rule: &dyn VotingRule) -> Result<bool> {
        let before = rule.winner(&self.profile)?;
        let after = rule.winner(&self.reversed_profile()?)?;
        Ok(before == self.winner_before && after == self.winner_after && self.truthful_order().prefers(after, before))
    }

    pub fn to_json(&self, check: &str, labels: &Labels) -> String {
        json!({
            "check": check,
            "profile": self.profile.to_inline(labels),
            "voter": self.voter,
            "truthful": self.truthful_order().format(labels),
            "winner_before": labels.name(self.winner_before),
            "winner_after": labels.name(self.winner_after),
        })
        .to_string()
    }
}

/// A voter who is strictly worse off after joining with their truthful order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParticipationWitness {
    pub profile_without: Profile,
    pub joiner_order: LinearOrder,
    /// Position at which the joiner is inserted.
    pub join_position: usize,
    pub winner_without: Alternative,
    pub winner_with: Alternative,
}

impl ParticipationWitness {
    pub fn profile_with(&self) -> Result<Profile> {
        self.profile_without.insert_voter(self.join_position, self.joiner_order)
    }

    pub fn revalidate(&self, family: &RuleFamily<'_>) -> Result<bool> {
        let without = family.get(self.profile_without.n())?.winner(&self.profile_without)?;
        let with = self.profile_with()?;
        let with_winner = family.get(with.n())?.winner(&with)?;
        Ok(without == self.winner_without
            && with_winner == self.winner_with
            && self.joiner_order.prefers(without, with_winner))
    }

    pub fn to_json(&self, check: &str, labels: &Labels) -> String {
        json!({
            "check": check,
            "profile": self.profile_without.to_inline(labels),
            "joiner": self.joiner_order.format(labels),
            "position": self.join_position,
            "winner_without": labels.name(self.winner_without),
            "winner_with": labels.name(self.winner_with),
        })
        .to_string()
    }
}

/// A set-valued outcome that a voter improves, under the stated extension,
/// by reversing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetReversalWitness {
    pub profile: Profile,
    pub voter: usize,
    pub set_before: AltSet,
    pub set_after: AltSet,
}

impl SetReversalWitness {
    pub fn to_json(&self, check: &str, labels: &Labels) -> String {
        json!({
            "check": check,
            "profile": self.profile.to_inline(labels),
            "voter": self.voter,
            "truthful": self.profile.voters()[self.voter].format(labels),
            "set_before": self.set_before.format(labels),
            "set_after": self.set_after.format(labels),
        })
        .to_string()
    }
}

/// A profitable misreport.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManipulationWitness {
    pub profile: Profile,
    pub voter: usize,
    pub misreport: LinearOrder,
    pub winner_truthful: Alternative,
    pub winner_misreport: Alternative,
}

impl ManipulationWitness {
    pub fn revalidate(&self, rule: &dyn VotingRule) -> Result<bool> {
        let truthful = rule.winner(&self.profile)?;
        let lie = rule.winner(&self.profile.replace_vote(self.voter, self.misreport)?)?;
        let order = self.profile.voters()[self.voter];
        Ok(truthful == self.winner_truthful && lie == self.winner_misreport && order.prefers(lie, truthful))
    }

    pub fn to_json(&self, check: &str, labels: &Labels) -> String {
        json!({
            "check": check,
            "profile": self.profile.to_inline(labels),
            "voter": self.voter,
            "truthful": self.profile.voters()[self.voter].format(labels),
            "misreport": self.misreport.format(labels),
            "winner_truthful": labels.name(self.winner_truthful),
            "winner_misreport": labels.name(self.winner_misreport),
        })
        .to_string()
    }
}

/// Rules for electorates of several sizes.
#[derive(Default)]
pub struct RuleFamily<'a> {
    by_size: BTreeMap<usize, &'a dyn VotingRule>,
    fallback: Option<&'a dyn VotingRule>,
}

impl<'a> RuleFamily<'a> {
    pub fn new() -> Self {
        RuleFamily::default()
    }

    /// One rule for every electorate size.
    pub fn uniform(rule: &'a dyn VotingRule) -> Self {
        RuleFamily {
            by_size: BTreeMap::new(),
            fallback: Some(rule),
        }
    }

    pub fn with(mut self, n: usize, rule: &'a dyn VotingRule) -> Self {
        self.by_size.insert(n, rule);
        self
    }

    pub fn get(&self, n: usize) -> Result<&'a dyn VotingRule> {
        self.by_size
            .get(&n)
            .copied()
            .or(self.fallback)
            .ok_or(Error::MissingSize(n))
    }
}

fn domain_size(n: usize, m: usize) -> Result<u64> {
    profile_count(n, m).ok_or(Error::IndexOutOfRange(u128::MAX, n, m))
}

/// First reversal witness at `profile`, if any voter has one.
pub fn reversal_violation_at(rule: &dyn VotingRule, profile: &Profile) -> Result<Option<ReversalWitness>> {
    let before = rule.winner(profile)?;
    for (i, vote) in profile.voters().iter().enumerate() {
        let after = rule.winner(&profile.reverse_voter(i)?)?;
        if vote.prefers(after, before) {
            return Ok(Some(ReversalWitness {
                profile: profile.clone(),
                voter: i,
                winner_before: before,
                winner_after: after,
            }));
        }
    }
    Ok(None)
}

fn reversal_scan(
    rule: &dyn VotingRule,
    n: usize,
    m: usize,
    config: &ScanConfig,
    strong_only: bool,
) -> Result<ScanOutcome<ReversalWitness>> {
    let orders = enumerate_orders(m)?;
    let total = domain_size(n, m)?;
    let outcome = scan_indices(total, config, |ix| {
        let p = index_to_profile_with(ProfileIndex(ix), n, &orders)?;
        let before = rule.winner(&p)?;
        for (i, vote) in p.voters().iter().enumerate() {
            // A strong violation needs the voter's top to win afterwards,
            // which is only possible if it did not win before.
            if strong_only && before == vote.top() {
                continue;
            }
            let after = rule.winner(&p.reverse_voter(i)?)?;
            let violated = if strong_only {
                after == vote.top()
            } else {
                vote.prefers(after, before)
            };
            if violated {
                return Ok(Some(ReversalWitness {
                    profile: p.clone(),
                    voter: i,
                    winner_before: before,
                    winner_after: after,
                }));
            }
        }
        Ok(None)
    })?;
    if let Some(w) = &outcome.witness {
        if !w.revalidate(rule)? {
            return Err(Error::NotAViolation("witness failed revalidation".into()));
        }
    }
    Ok(outcome)
}

/// Searches for a preference reversal paradox over all `n`-voter profiles.
pub fn check_halfway_monotonicity(
    rule: &dyn VotingRule,
    n: usize,
    m: usize,
    config: &ScanConfig,
) -> Result<ScanOutcome<ReversalWitness>> {
    reversal_scan(rule, n, m, config, false)
}

/// Searches for a voter whose top alternative wins once they reverse.
pub fn check_strong_reversal(
    rule: &dyn VotingRule,
    n: usize,
    m: usize,
    config: &ScanConfig,
) -> Result<ScanOutcome<ReversalWitness>> {
    reversal_scan(rule, n, m, config, true)
}

/// Searches all `(n-1)`-voter profiles and joiner orders for a no-show
/// paradox. The joiner is appended as the last voter.
pub fn check_participation(
    family: &RuleFamily<'_>,
    n: usize,
    m: usize,
    config: &ScanConfig,
) -> Result<ScanOutcome<ParticipationWitness>> {
    let larger = family.get(n)?;
    if n <= 1 {
        // Nobody to join: no base election exists.
        return Ok(ScanOutcome {
            witness: None,
            coverage: crate::scan::Coverage::Exhaustive { profiles: 0 },
        });
    }
    let smaller = family.get(n - 1)?;
    let orders = enumerate_orders(m)?;
    let total = domain_size(n - 1, m)?;
    let outcome = scan_indices(total, config, |ix| {
        let p = index_to_profile_with(ProfileIndex(ix), n - 1, &orders)?;
        let without = smaller.winner(&p)?;
        for joiner in &orders {
            let with = larger.winner(&p.add_voter(*joiner)?)?;
            if joiner.prefers(without, with) {
                return Ok(Some(ParticipationWitness {
                    profile_without: p.clone(),
                    joiner_order: *joiner,
                    join_position: n - 1,
                    winner_without: without,
                    winner_with: with,
                }));
            }
        }
        Ok(None)
    })?;
    if let Some(w) = &outcome.witness {
        if !w.revalidate(family)? {
            return Err(Error::NotAViolation("witness failed revalidation".into()));
        }
    }
    Ok(outcome)
}

/// Splits a reversal into the voter leaving and the reversed voter joining.
/// Since the voter strictly prefers `f(P_-i, rev)` to `f(P)`, one of
/// `f(P) >= f(P_-i)` (truthful joining) or `f(P_-i, rev) <=_i f(P_-i)`
/// (reversed joining) must fail; the failing link is returned as a
/// participation violation between sizes `n-1` and `n`, with the joiner
/// re-inserted at the voter's own position.
pub fn explain_hwm_via_participation(
    witness: &ReversalWitness,
    family: &RuleFamily<'_>,
) -> Result<ParticipationWitness> {
    let n = witness.profile.n();
    let full = family.get(n)?;
    if !witness.revalidate(full)? {
        return Err(Error::NotAViolation(format!(
            "voter {} does not gain by reversing",
            witness.voter
        )));
    }
    let truthful = witness.truthful_order();
    let without = witness.profile.remove_voter(witness.voter)?;
    let middle = family.get(n - 1)?.winner(&without)?;

    let truthful_join = ParticipationWitness {
        profile_without: without.clone(),
        joiner_order: truthful,
        join_position: witness.voter,
        winner_without: middle,
        winner_with: witness.winner_before,
    };
    let reversed_join = ParticipationWitness {
        profile_without: without,
        joiner_order: truthful.reverse(),
        join_position: witness.voter,
        winner_without: middle,
        winner_with: witness.winner_after,
    };
    let link = if truthful.prefers(middle, witness.winner_before) {
        truthful_join
    } else {
        debug_assert!(truthful.prefers(witness.winner_after, middle));
        reversed_join
    };
    if !link.revalidate(family)? {
        return Err(Error::NotAViolation(
            "derived participation witness failed revalidation".into(),
        ));
    }
    Ok(link)
}

/// How a voter compares outcome sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetExtension {
    /// By the best element.
    Optimistic,
    /// By the worst element.
    Pessimistic,
}

impl SetExtension {
    fn representative(self, set: AltSet, order: &LinearOrder) -> Result<Alternative> {
        let pick = match self {
            SetExtension::Optimistic => set.best(order),
            SetExtension::Pessimistic => set.worst(order),
        };
        pick.ok_or(Error::EmptyOutcomeSet)
    }

    pub fn name(self) -> &'static str {
        match self {
            SetExtension::Optimistic => "hwm-optimistic",
            SetExtension::Pessimistic => "hwm-pessimistic",
        }
    }
}

fn set_reversal_scan(
    rule: &dyn SetRule,
    extension: SetExtension,
    n: usize,
    m: usize,
    config: &ScanConfig,
) -> Result<ScanOutcome<SetReversalWitness>> {
    let orders = enumerate_orders(m)?;
    let total = domain_size(n, m)?;
    scan_indices(total, config, |ix| {
        let p = index_to_profile_with(ProfileIndex(ix), n, &orders)?;
        let before = rule.winners(&p)?;
        for (i, vote) in p.voters().iter().enumerate() {
            let after = rule.winners(&p.reverse_voter(i)?)?;
            let (b, a) = (
                extension.representative(before, vote)?,
                extension.representative(after, vote)?,
            );
            if vote.prefers(a, b) {
                return Ok(Some(SetReversalWitness {
                    profile: p.clone(),
                    voter: i,
                    set_before: before,
                    set_after: after,
                }));
            }
        }
        Ok(None)
    })
}

pub fn check_hwm_optimistic(
    rule: &dyn SetRule,
    n: usize,
    m: usize,
    config: &ScanConfig,
) -> Result<ScanOutcome<SetReversalWitness>> {
    set_reversal_scan(rule, SetExtension::Optimistic, n, m, config)
}

pub fn check_hwm_pessimistic(
    rule: &dyn SetRule,
    n: usize,
    m: usize,
    config: &ScanConfig,
) -> Result<ScanOutcome<SetReversalWitness>> {
    set_reversal_scan(rule, SetExtension::Pessimistic, n, m, config)
}

/// Domain over which manipulability is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ManipulationDomain {
    Full,
    /// Profiles with a Condorcet winner; both the truthful and the
    /// manipulated profile must lie in it.
    Condorcet,
}

pub fn check_manipulability(
    rule: &dyn VotingRule,
    n: usize,
    m: usize,
    domain: ManipulationDomain,
    config: &ScanConfig,
) -> Result<ScanOutcome<ManipulationWitness>> {
    let orders = enumerate_orders(m)?;
    let total = domain_size(n, m)?;
    let in_domain = |p: &Profile| match domain {
        ManipulationDomain::Full => true,
        ManipulationDomain::Condorcet => condorcet_winner(p).is_some(),
    };
    let outcome = scan_indices(total, config, |ix| {
        let p = index_to_profile_with(ProfileIndex(ix), n, &orders)?;
        if !in_domain(&p) {
            return Ok(None);
        }
        let truthful = rule.winner(&p)?;
        for (i, vote) in p.voters().iter().enumerate() {
            if vote.top() == truthful {
                continue;
            }
            for lie in orders.iter().filter(|&o| o != vote) {
                let q = p.replace_vote(i, *lie)?;
                if !in_domain(&q) {
                    continue;
                }
                let outcome = rule.winner(&q)?;
                if vote.prefers(outcome, truthful) {
                    return Ok(Some(ManipulationWitness {
                        profile: p.clone(),
                        voter: i,
                        misreport: *lie,
                        winner_truthful: truthful,
                        winner_misreport: outcome,
                    }));
                }
            }
        }
        Ok(None)
    })?;
    if let Some(w) = &outcome.witness {
        if !w.revalidate(rule)? {
            return Err(Error::NotAViolation("witness failed revalidation".into()));
        }
    }
    Ok(outcome)
}
