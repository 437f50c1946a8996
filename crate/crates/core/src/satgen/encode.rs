use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::prefs::{enumerate_orders, factorial, profile_count, Alternative, LinearOrder, Profile};
use crate::proofcheck::{voters_to_reverse, ProofTree};
use crate::scan::{map_indices, Execution, DEFAULT_BUDGET};
use crate::tally::{condorcet_winner, MarginMatrix};

use super::varmap::{EncodingMode, VariableMap};
use super::CnfFormula;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EncodeConfig {
    /// Maximum number of keys (profiles or margin matrices per layer).
    pub budget: u64,
    pub execution: Execution,
}

impl Default for EncodeConfig {
    fn default() -> Self {
        EncodeConfig {
            budget: DEFAULT_BUDGET,
            execution: Execution::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClauseCounts {
    pub functionality: usize,
    pub condorcet: usize,
    pub hwm: usize,
}

impl ClauseCounts {
    pub fn total(&self) -> usize {
        self.functionality + self.condorcet + self.hwm
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Encoding {
    pub formula: CnfFormula,
    pub map: VariableMap,
    pub counts: ClauseCounts,
}

/// At least one and at most one alternative per key.
fn functionality_block(map: &VariableMap, key: usize) -> Vec<i32> {
    let m = map.m();
    let alts = || (0..m).map(|a| Alternative(a as u8));
    let mut out: Vec<i32> = alts().map(|a| map.var(key, a)).collect();
    out.push(0);
    for a in 0..m {
        for b in a + 1..m {
            out.extend([
                -map.var(key, Alternative(a as u8)),
                -map.var(key, Alternative(b as u8)),
                0,
            ]);
        }
    }
    out
}

/// A voter holding `order` at key `from` who reverses lands at key `to`:
/// for every `a` above `b` in `order`, not both `f(from) = b` and `f(to) = a`.
fn hwm_clauses(map: &VariableMap, order: &LinearOrder, from: usize, to: usize, out: &mut Vec<i32>) {
    let m = order.m();
    for p in 0..m {
        for q in p + 1..m {
            out.extend([-map.var(from, order.at(q)), -map.var(to, order.at(p)), 0]);
        }
    }
}

fn assemble(map: VariableMap, blocks: [Vec<Vec<i32>>; 3]) -> Encoding {
    let mut formula = CnfFormula::new(map.num_vars());
    let mut counts = [0usize; 3];
    for (family, chunks) in blocks.iter().enumerate() {
        let before = formula.num_clauses();
        for chunk in chunks {
            formula.extend_terminated(chunk);
        }
        counts[family] = formula.num_clauses() - before;
    }
    Encoding {
        formula,
        map,
        counts: ClauseCounts {
            functionality: counts[0],
            condorcet: counts[1],
            hwm: counts[2],
        },
    }
}

/// The full formula over every key of the domain: functionality, one unit
/// per key with a Condorcet winner, and the half-way monotonicity clauses.
/// Clauses appear family by family in ascending key order.
pub fn encode_full(n: usize, m: usize, mode: EncodingMode, config: &EncodeConfig) -> Result<Encoding> {
    match mode {
        EncodingMode::Profile => encode_profiles(n, m, config),
        EncodingMode::C2 => encode_margins(n, m, config),
        EncodingMode::Proof => Err(Error::Parse {
            line: 0,
            message: "proof mode needs a tree; use encode_proof_neighborhood".into(),
        }),
    }
}

fn encode_profiles(n: usize, m: usize, config: &EncodeConfig) -> Result<Encoding> {
    let total = profile_count(n, m).ok_or(Error::IndexOutOfRange(u128::MAX, n, m))?;
    if total > config.budget {
        return Err(Error::BudgetExceeded {
            budget: config.budget,
            detail: format!("full encoding needs {total} profiles"),
        });
    }
    let map = VariableMap::profiles(n, m)?;
    let orders = enumerate_orders(m)?;
    let base = factorial(m) as u64;
    let reversed: Vec<u64> = orders.iter().map(|o| o.reverse().index() as u64).collect();
    // weight of voter i's digit: base^(n-1-i)
    let weights: Vec<u64> = (0..n).map(|i| base.pow((n - 1 - i) as u32)).collect();
    let digits = |ix: u64| -> Vec<usize> { weights.iter().map(|w| ((ix / w) % base) as usize).collect() };

    let functionality = map_indices(total, config.execution, |k| functionality_block(&map, k as usize));
    let condorcet = map_indices(total, config.execution, |k| {
        let mut mm = MarginMatrix::zero(m);
        for d in digits(k) {
            mm.add_vote(&orders[d]);
        }
        mm.condorcet_winner()
            .map_or_else(Vec::new, |x| vec![map.var(k as usize, x), 0])
    });
    let hwm = map_indices(total, config.execution, |k| {
        let mut out = Vec::new();
        for (i, d) in digits(k).into_iter().enumerate() {
            let to = k - d as u64 * weights[i] + reversed[d] * weights[i];
            hwm_clauses(&map, &orders[d], k as usize, to as usize, &mut out);
        }
        out
    });
    Ok(assemble(map, [functionality, condorcet, hwm]))
}

/// Margin matrices of all `k`-voter profiles, for `k = 0..=n`, each layer
/// sorted. Layer `k` is layer `k-1` plus every single vote.
pub fn realizable_margins(n: usize, m: usize, budget: u64) -> Result<Vec<Vec<MarginMatrix>>> {
    let orders = enumerate_orders(m)?;
    let mut layers = vec![vec![MarginMatrix::zero(m)]];
    for k in 1..=n {
        let mut next = BTreeSet::new();
        for t in &layers[k - 1] {
            for o in &orders {
                let mut s = *t;
                s.add_vote(o);
                next.insert(s);
            }
            if next.len() as u64 > budget {
                return Err(Error::BudgetExceeded {
                    budget,
                    detail: format!("more than {budget} margin matrices for {k} voters"),
                });
            }
        }
        layers.push(next.into_iter().collect());
    }
    Ok(layers)
}

fn encode_margins(n: usize, m: usize, config: &EncodeConfig) -> Result<Encoding> {
    if n == 0 {
        return Err(Error::EmptyProfile);
    }
    let mut layers = realizable_margins(n, m, config.budget)?;
    let keys = layers.pop().expect("n >= 1");
    let smaller: BTreeSet<MarginMatrix> = layers.pop().expect("n >= 1").into_iter().collect();
    let orders = enumerate_orders(m)?;
    let map = VariableMap::margins(n, m, keys);
    let total = map.num_keys() as u64;

    let functionality = map_indices(total, config.execution, |k| functionality_block(&map, k as usize));
    let condorcet = map_indices(total, config.execution, |k| {
        let mm = map.margin_key(k as usize).expect("in range");
        mm.condorcet_winner()
            .map_or_else(Vec::new, |x| vec![map.var(k as usize, x), 0])
    });
    let hwm = map_indices(total, config.execution, |k| {
        let t = *map.margin_key(k as usize).expect("in range");
        let mut out = Vec::new();
        for o in &orders {
            let mut rest = t;
            rest.remove_vote(o);
            // only if some profile with these margins has a voter holding `o`
            if !smaller.contains(&rest) {
                continue;
            }
            rest.add_vote(&o.reverse());
            let to = map.margin_index(&rest).expect("reversal stays realizable");
            hwm_clauses(&map, o, k as usize, to, &mut out);
        }
        out
    });
    Ok(assemble(map, [functionality, condorcet, hwm]))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NeighborhoodStyle {
    /// Edges whose reversed voters share one order link `from` and `to`
    /// directly; mixed edges go through their single-voter intermediates.
    #[default]
    Collapsed,
    /// Every single-voter intermediate gets its own variables.
    Expanded,
}

/// Variables for the profiles of a proof tree, functionality for each, one
/// Condorcet unit per leaf (winner computed by tally), and the half-way
/// monotonicity clauses along each edge.
pub fn encode_proof_neighborhood(tree: &ProofTree, style: NeighborhoodStyle) -> Result<Encoding> {
    let labels = &tree.labels;
    let mut names = vec![tree.root_name().to_string()];
    let mut derived: Vec<(String, Profile)> = vec![(tree.root_name().to_string(), tree.root().clone())];
    // (order, from node, to node) by name
    let mut links: Vec<(LinearOrder, String, String)> = Vec::new();
    let mut pending: Vec<&crate::proofcheck::ReversalEdge> = tree.edges.iter().collect();
    while !pending.is_empty() {
        let ready = pending
            .iter()
            .position(|e| derived.iter().any(|(n, _)| n == &e.from))
            .ok_or_else(|| Error::ProofCheck {
                path: pending[0].name(),
                message: "edge not reachable from the root".into(),
            })?;
        let edge = pending.remove(ready);
        let from = derived.iter().find(|(n, _)| n == &edge.from).expect("ready").1.clone();
        let voters = voters_to_reverse(&from, edge, labels)?;
        let steps: Vec<LinearOrder> = voters.iter().map(|&i| from.voters()[i]).collect();
        let mixed = steps.windows(2).any(|w| w[0] != w[1]);
        let mut current = from;
        for &i in &voters {
            current = current.reverse_voter(i)?;
        }
        if style == NeighborhoodStyle::Collapsed && !mixed {
            links.push((steps[0], edge.from.clone(), edge.to.clone()));
        } else {
            let mut prev = edge.from.clone();
            for (j, o) in steps.iter().enumerate() {
                let node = if j + 1 == steps.len() {
                    edge.to.clone()
                } else {
                    let name = format!("{}#{}", edge.name(), j + 1);
                    names.push(name.clone());
                    name
                };
                links.push((*o, prev, node.clone()));
                prev = node;
            }
        }
        names.push(edge.to.clone());
        derived.push((edge.to.clone(), current));
    }
    let map = VariableMap::named(tree.n(), labels.clone(), names);
    let index = |name: &str| map.name_index(name).expect("named above");

    let functionality: Vec<Vec<i32>> = (0..map.num_keys()).map(|k| functionality_block(&map, k)).collect();
    let mut condorcet = Vec::new();
    for leaf in &tree.leaves {
        let profile = &derived
            .iter()
            .find(|(n, _)| n == &leaf.profile)
            .ok_or_else(|| Error::ProofCheck {
                path: leaf.profile.clone(),
                message: "leaf names an unknown profile".into(),
            })?
            .1;
        if let Some(x) = condorcet_winner(profile) {
            condorcet.push(vec![map.var(index(&leaf.profile), x), 0]);
        }
    }
    let hwm: Vec<Vec<i32>> = links
        .iter()
        .map(|(o, from, to)| {
            let mut out = Vec::new();
            hwm_clauses(&map, o, index(from), index(to), &mut out);
            out
        })
        .collect();
    Ok(assemble(map, [functionality, condorcet, hwm]))
}
