use crate::error::{Error, Result};
use crate::monotonicity::{check_halfway_monotonicity, ReversalWitness};
use crate::prefs::{enumerate_orders, index_to_profile_with, profile_count, Alternative, Profile, ProfileIndex};
use crate::rules::{RuleTable, TableKey, VotingRule};
use crate::scan::{scan_indices, Coverage, ScanConfig};
use crate::tally::condorcet_winner;

use super::varmap::{EncodingMode, VariableMap};
use super::Assignment;

fn winners(assignment: &Assignment, map: &VariableMap) -> Result<Vec<Alternative>> {
    if assignment.0.len() != map.num_vars() {
        return Err(Error::MalformedModel(format!(
            "model has {} variables, map has {}",
            assignment.0.len(),
            map.num_vars()
        )));
    }
    let values = assignment
        .to_bools()
        .map_err(|var| Error::MalformedModel(format!("variable {var} is unassigned")))?;
    let m = map.m();
    (0..map.num_keys())
        .map(|k| {
            let chosen: Vec<usize> = (0..m).filter(|&a| values[k * m + a]).collect();
            match chosen.as_slice() {
                [a] => Ok(Alternative(*a as u8)),
                _ => Err(Error::NotAFunction {
                    key: map.key_name(k),
                    true_count: chosen.len(),
                }),
            }
        })
        .collect()
}

/// The rule a model describes, as a table over the map's keys.
pub fn decode_model(assignment: &Assignment, map: &VariableMap) -> Result<RuleTable> {
    let chosen = winners(assignment, map)?;
    let mut table = match map.mode() {
        EncodingMode::Profile => RuleTable::empty_profile(map.n(), map.m())?,
        EncodingMode::C2 => RuleTable::empty_c2(map.n(), map.m()),
        EncodingMode::Proof => {
            return Err(Error::MalformedModel(
                "proof-tree models name profiles, not a full rule; use decode_named".into(),
            ))
        }
    };
    for (k, a) in chosen.into_iter().enumerate() {
        let key = match map.mode() {
            EncodingMode::Profile => TableKey::Profile(ProfileIndex(k as u64)),
            _ => TableKey::Margin(*map.margin_key(k).expect("c2 map")),
        };
        table.set(key, a)?;
    }
    Ok(table)
}

/// Chosen alternative per named profile.
pub fn decode_named(assignment: &Assignment, map: &VariableMap) -> Result<Vec<(String, Alternative)>> {
    Ok(winners(assignment, map)?
        .into_iter()
        .enumerate()
        .map(|(k, a)| (map.key_name(k), a))
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct RuleVerification {
    pub coverage: Coverage,
    /// First profile whose Condorcet winner the table does not pick:
    /// `(profile, condorcet winner, table's choice)`.
    pub condorcet_violation: Option<(Profile, Alternative, Alternative)>,
    pub hwm_violation: Option<ReversalWitness>,
}

impl RuleVerification {
    pub fn is_clean(&self) -> bool {
        self.condorcet_violation.is_none() && self.hwm_violation.is_none()
    }
}

/// Re-checks Condorcet-consistency and half-way monotonicity of a table by
/// direct evaluation, without reference to any formula.
pub fn verify_rule(table: &RuleTable, config: &ScanConfig) -> Result<RuleVerification> {
    let (n, m) = (table.n(), table.m());
    let orders = enumerate_orders(m)?;
    let total = profile_count(n, m).ok_or(Error::IndexOutOfRange(u128::MAX, n, m))?;
    let condorcet = scan_indices(total, config, |ix| {
        let p = index_to_profile_with(ProfileIndex(ix), n, &orders)?;
        match condorcet_winner(&p) {
            Some(x) => {
                let chosen = table.winner(&p)?;
                Ok((chosen != x).then_some((p, x, chosen)))
            }
            None => Ok(None),
        }
    })?;
    let hwm = check_halfway_monotonicity(table, n, m, config)?;
    Ok(RuleVerification {
        coverage: hwm.coverage,
        condorcet_violation: condorcet.witness,
        hwm_violation: hwm.witness,
    })
}
