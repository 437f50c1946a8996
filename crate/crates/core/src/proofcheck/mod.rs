//! Machine checking of reversal proof trees.
//!
//! A tree starts at a root profile and branches on the value of `f` there.
//! Each edge reverses some voters and carries a set `S`: if `f(from)` lies in
//! `S`, half-way monotonicity forces `f(to)` into `S` as well. That holds for
//! a single reversing voter exactly when `S` is a bottom segment of the voter's
//! truthful order, since the outcome may only move weakly down in that order.
//! Edges reversing several voters are checked as a sequence of single
//! reversals in ascending voter order.
//!
//! Every node carries the set of outcomes still possible on its branch. At a
//! leaf the Condorcet winner must lie outside that set, which closes the
//! branch.

mod format;
mod trees;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::prefs::{Alternative, Labels, LinearOrder, Profile};
use crate::rules::AltSet;
use crate::tally::condorcet_winner;

pub use format::{parse_proof_tree, write_proof_tree};
pub use trees::{build_even_tree, build_odd_tree, build_perez_profile, verify_perez, PerezCase, PerezReport};

/// Reversal of some voters between two named profiles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversalEdge {
    pub from: String,
    pub to: String,
    /// `(count, order)`: reverse `count` voters whose truthful vote is `order`.
    pub reversed: Vec<(usize, LinearOrder)>,
    pub carried: AltSet,
}

impl ReversalEdge {
    pub fn name(&self) -> String {
        format!("{}->{}", self.from, self.to)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leaf {
    pub profile: String,
    pub condorcet: Alternative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTree {
    pub labels: Labels,
    /// Named profiles; the first one is the root.
    pub profiles: Vec<(String, Profile)>,
    pub edges: Vec<ReversalEdge>,
    pub leaves: Vec<Leaf>,
}

impl ProofTree {
    pub fn n(&self) -> usize {
        self.root().n()
    }

    pub fn m(&self) -> usize {
        self.labels.m()
    }

    pub fn root_name(&self) -> &str {
        &self.profiles[0].0
    }

    pub fn root(&self) -> &Profile {
        &self.profiles[0].1
    }

    pub fn profile(&self, name: &str) -> Option<&Profile> {
        self.profiles.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    fn out_edges<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a ReversalEdge> + 'a {
        self.edges.iter().filter(move |e| e.from == name)
    }

    /// Adds `k` opposed pairs (identity order and its reverse) to every
    /// profile. Margins are unchanged, so the proof should go through for
    /// `n + 2k` voters.
    pub fn padded(&self, k: usize) -> Result<ProofTree> {
        let order = LinearOrder::identity(self.m());
        let mut out = self.clone();
        for (_, p) in &mut out.profiles {
            for _ in 0..k {
                *p = p.pad(order)?;
            }
        }
        Ok(out)
    }
}

/// One single-voter reversal inside an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversalStep {
    pub voter: usize,
    pub truthful: LinearOrder,
    /// Carried set re-derived by replaying the reversals up to this step.
    pub replayed: AltSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeReport {
    pub edge: String,
    pub steps: Vec<ReversalStep>,
    /// The reached profile, with voters in the positions the reversals put
    /// them in.
    pub derived: Profile,
}

/// Everything ranked at or below the highest-ranked member of `set`.
fn down_closure(set: AltSet, order: &LinearOrder) -> AltSet {
    match set.best(order) {
        None => AltSet::empty(),
        Some(top) => order.ranking().skip(order.position(top)).collect(),
    }
}

/// Largest bottom segment of `order` contained in `set`.
fn down_interior(set: AltSet, order: &LinearOrder) -> AltSet {
    order.ranking().rev().take_while(|&a| set.contains(a)).collect()
}

/// Voters an edge reverses in `from`: for each `(count, order)` the
/// lowest-index holders of `order`, in ascending voter order.
pub fn voters_to_reverse(from: &Profile, edge: &ReversalEdge, labels: &Labels) -> Result<Vec<usize>> {
    let mut taken = BTreeSet::new();
    for &(count, order) in &edge.reversed {
        let mut found = 0;
        for (i, v) in from.voters().iter().enumerate() {
            if found == count {
                break;
            }
            if *v == order && taken.insert(i) {
                found += 1;
            }
        }
        if found < count {
            return Err(Error::EdgeMismatch {
                edge: edge.name(),
                message: format!(
                    "{} has only {found} {} voter(s) to reverse, {count} requested",
                    edge.from,
                    order.format(labels)
                ),
            });
        }
    }
    Ok(taken.into_iter().collect())
}

/// Checks that `to` is `from` with the stated voters reversed, and that the
/// carried set survives each single reversal.
pub fn verify_edge(from: &Profile, to: &Profile, edge: &ReversalEdge, labels: &Labels) -> Result<EdgeReport> {
    let voters = voters_to_reverse(from, edge, labels)?;
    let mut derived = from.clone();
    for &i in &voters {
        derived = derived.reverse_voter(i)?;
    }
    if !derived.same_multiset(to) {
        return Err(Error::EdgeMismatch {
            edge: edge.name(),
            message: format!(
                "reversing gives {} but {} is {}",
                derived.to_inline(labels),
                edge.to,
                to.to_inline(labels)
            ),
        });
    }
    let mut steps = Vec::with_capacity(voters.len());
    let mut replayed = edge.carried;
    for &i in &voters {
        let truthful = from.voters()[i];
        for w in edge.carried.iter() {
            if let Some(v) = truthful
                .ranking()
                .skip(truthful.position(w) + 1)
                .find(|&v| !edge.carried.contains(v))
            {
                return Err(Error::TransportUnsound {
                    edge: edge.name(),
                    voter: i,
                    carried: labels.name(w).to_string(),
                    other: labels.name(v).to_string(),
                });
            }
        }
        replayed = down_closure(replayed, &truthful);
        steps.push(ReversalStep {
            voter: i,
            truthful,
            replayed,
        });
    }
    if replayed != edge.carried {
        return Err(Error::TransportUnsound {
            edge: edge.name(),
            voter: voters.last().copied().unwrap_or(0),
            carried: edge.carried.format(labels),
            other: replayed.difference(edge.carried).format(labels),
        });
    }
    Ok(EdgeReport {
        edge: edge.name(),
        steps,
        derived,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafReport {
    pub profile: String,
    pub path: String,
    pub condorcet: Alternative,
    /// Outcomes the branch still allows at this leaf.
    pub forbidden: AltSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub node: String,
    pub possible: AltSet,
    pub covered: AltSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeReport {
    pub n: usize,
    pub m: usize,
    pub edges: Vec<EdgeReport>,
    pub coverage: Vec<CoverageReport>,
    pub leaves: Vec<LeafReport>,
    pub conclusion: String,
    labels: Labels,
}

impl fmt::Display for TreeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = &self.labels;
        writeln!(f, "tree n={} m={}", self.n, self.m)?;
        for e in &self.edges {
            let voters: Vec<String> = e
                .steps
                .iter()
                .map(|s| format!("{}:{}", s.voter, s.truthful.compact(l)))
                .collect();
            let carried = e.steps.last().map(|s| s.replayed.format(l)).unwrap_or_default();
            writeln!(
                f,
                "edge {} sound: reverse [{}] carry {}",
                e.edge,
                voters.join(" "),
                carried
            )?;
        }
        for c in &self.coverage {
            writeln!(
                f,
                "coverage {}: possible {} covered by {}",
                c.node,
                c.possible.format(l),
                c.covered.format(l)
            )?;
        }
        for leaf in &self.leaves {
            writeln!(
                f,
                "leaf {} ({}): condorcet winner {} outside {}",
                leaf.profile,
                leaf.path,
                l.name(leaf.condorcet),
                leaf.forbidden.format(l)
            )?;
        }
        write!(f, "{}", self.conclusion)
    }
}

/// Node names in depth-first order, with paths, after structural checks.
struct Walk {
    order: Vec<String>,
    paths: BTreeMap<String, String>,
    derived: BTreeMap<String, Profile>,
    edge_reports: Vec<EdgeReport>,
}

fn walk(tree: &ProofTree) -> Result<Walk> {
    let root = tree.root_name().to_string();
    let perr = |path: &str, message: String| Error::ProofCheck {
        path: path.to_string(),
        message,
    };
    let mut names = BTreeSet::new();
    for (name, p) in &tree.profiles {
        if !names.insert(name.clone()) {
            return Err(perr(name, "duplicate profile name".into()));
        }
        if p.m() != tree.m() {
            return Err(perr(name, format!("profile has m={}, tree has m={}", p.m(), tree.m())));
        }
    }
    let mut incoming: BTreeMap<&str, usize> = BTreeMap::new();
    for e in &tree.edges {
        for end in [&e.from, &e.to] {
            if !names.contains(end) {
                return Err(perr(&e.name(), format!("unknown profile `{end}`")));
            }
        }
        *incoming.entry(e.to.as_str()).or_default() += 1;
    }
    if incoming.contains_key(root.as_str()) {
        return Err(perr(&root, "root has an incoming edge".into()));
    }
    if let Some((name, _)) = incoming.iter().find(|(_, &c)| c > 1) {
        return Err(perr(name, "profile reached by more than one edge".into()));
    }

    let mut w = Walk {
        order: Vec::new(),
        paths: BTreeMap::new(),
        derived: BTreeMap::new(),
        edge_reports: Vec::new(),
    };
    w.paths.insert(root.clone(), root.clone());
    w.derived.insert(root.clone(), tree.root().clone());
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        w.order.push(node.clone());
        let edges: Vec<&ReversalEdge> = tree.out_edges(&node).collect();
        for e in edges.iter().rev() {
            let path = format!("{} -> {}", w.paths[&node], e.to);
            let from = w.derived[&node].clone();
            let to = tree.profile(&e.to).expect("checked above");
            let report = verify_edge(&from, to, e, &tree.labels).map_err(|err| match err {
                Error::ProofCheck { .. } => err,
                other => perr(&path, other.to_string()),
            })?;
            w.derived.insert(e.to.clone(), report.derived.clone());
            w.paths.insert(e.to.clone(), path);
            w.edge_reports.push(report);
            stack.push(e.to.clone());
        }
    }
    if let Some((name, _)) = tree.profiles.iter().find(|(n, _)| !w.paths.contains_key(n)) {
        return Err(perr(name, "profile not reachable from the root".into()));
    }
    // report edges in declaration order
    w.edge_reports
        .sort_by_key(|r| tree.edges.iter().position(|e| e.name() == r.edge));
    Ok(w)
}

fn leaf_winner(tree: &ProofTree, w: &Walk, leaf: &Leaf) -> Result<Alternative> {
    let path = w
        .paths
        .get(&leaf.profile)
        .cloned()
        .unwrap_or_else(|| leaf.profile.clone());
    let profile = w.derived.get(&leaf.profile).ok_or_else(|| Error::ProofCheck {
        path: path.clone(),
        message: "leaf names an unknown profile".into(),
    })?;
    if tree.out_edges(&leaf.profile).next().is_some() {
        return Err(Error::ProofCheck {
            path,
            message: "leaf has outgoing edges".into(),
        });
    }
    match condorcet_winner(profile) {
        Some(x) if x == leaf.condorcet => Ok(x),
        found => Err(Error::ProofCheck {
            path,
            message: format!(
                "claimed Condorcet winner {}, tally gives {}",
                tree.labels.name(leaf.condorcet),
                found.map_or("none", |x| tree.labels.name(x))
            ),
        }),
    }
}

/// Forward propagation of the outcomes each branch still allows. Shared by
/// the resolute check and the pessimistic set-valued check, where "f(P) in S"
/// reads as "F(P) meets S".
fn forward(tree: &ProofTree, w: &Walk) -> Result<(Vec<CoverageReport>, Vec<LeafReport>)> {
    let all = AltSet::full(tree.m());
    let mut possible: BTreeMap<String, AltSet> = BTreeMap::new();
    possible.insert(tree.root_name().to_string(), all);
    let mut coverage = Vec::new();
    for node in &w.order {
        let here = possible[node];
        let out: Vec<&ReversalEdge> = tree.out_edges(node).collect();
        if out.is_empty() {
            if !tree.leaves.iter().any(|l| &l.profile == node) {
                return Err(Error::ProofCheck {
                    path: w.paths[node].clone(),
                    message: "branch ends without a leaf claim".into(),
                });
            }
            continue;
        }
        let covered = out.iter().fold(AltSet::empty(), |acc, e| acc.union(e.carried));
        if !here.is_subset(covered) {
            return Err(Error::ProofCheck {
                path: w.paths[node].clone(),
                message: format!("case analysis misses {}", here.difference(covered).format(&tree.labels)),
            });
        }
        coverage.push(CoverageReport {
            node: node.clone(),
            possible: here,
            covered,
        });
        for e in out {
            let report = w.edge_reports.iter().find(|r| r.edge == e.name()).expect("walked");
            let next = report
                .steps
                .iter()
                .fold(here.intersection(e.carried), |acc, s| down_closure(acc, &s.truthful));
            possible.insert(e.to.clone(), next);
        }
    }
    let mut leaves = Vec::new();
    for leaf in &tree.leaves {
        let x = leaf_winner(tree, w, leaf)?;
        let forbidden = possible[&leaf.profile];
        if forbidden.contains(x) {
            return Err(Error::ProofCheck {
                path: w.paths[&leaf.profile].clone(),
                message: format!(
                    "Condorcet winner {} is still allowed by {}",
                    tree.labels.name(x),
                    forbidden.format(&tree.labels)
                ),
            });
        }
        leaves.push(LeafReport {
            profile: leaf.profile.clone(),
            path: w.paths[&leaf.profile].clone(),
            condorcet: x,
            forbidden,
        });
    }
    Ok((coverage, leaves))
}

/// Verifies every edge, case coverage at every branching node, and every
/// leaf's Condorcet winner.
pub fn verify_tree(tree: &ProofTree) -> Result<TreeReport> {
    let w = walk(tree)?;
    let (coverage, leaves) = forward(tree, &w)?;
    Ok(TreeReport {
        n: tree.n(),
        m: tree.m(),
        coverage,
        leaves,
        conclusion: format!(
            "no Condorcet extension is half-way monotone for n={} m={}",
            tree.n(),
            tree.m()
        ),
        edges: w.edge_reports,
        labels: tree.labels.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IrresoluteMode {
    Optimistic,
    Pessimistic,
}

impl fmt::Display for IrresoluteMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IrresoluteMode::Optimistic => "optimistic",
            IrresoluteMode::Pessimistic => "pessimistic",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrresoluteReport {
    pub mode: IrresoluteMode,
    /// Per node, the alternatives shown to be outside `F(node)`, in the
    /// order they were established.
    pub excluded: Vec<(String, AltSet)>,
    pub conclusion: String,
    labels: Labels,
}

impl IrresoluteReport {
    pub fn excluded_at(&self, node: &str) -> Option<AltSet> {
        self.excluded.iter().find(|(n, _)| n == node).map(|&(_, s)| s)
    }
}

impl fmt::Display for IrresoluteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} half-way monotonicity", self.mode)?;
        for (node, set) in &self.excluded {
            writeln!(f, "{node}: F excludes {}", set.format(&self.labels))?;
        }
        write!(f, "{}", self.conclusion)
    }
}

/// Set-valued version of the tree argument.
///
/// Pessimistic: forward, "F(P) meets S" is transported exactly like the
/// resolute claim, so every root case meets a leaf `F = {x}` outside its set
/// and `F(root)` is empty.
///
/// Optimistic: backward. A leaf with Condorcet winner `x` has `F` outside
/// `A - {x}`. Across an edge, an exclusion `E` at `to` pulls back to the
/// largest bottom segment of `E` in each reversing voter's truthful order
/// (the reversed voter's best element can only get worse). Exclusions from
/// all children accumulate; the root must end up excluding all of `A`.
pub fn verify_tree_irresolute(tree: &ProofTree, mode: IrresoluteMode) -> Result<IrresoluteReport> {
    let w = walk(tree)?;
    let all = AltSet::full(tree.m());
    let root = tree.root_name().to_string();
    let mut excluded = Vec::new();
    match mode {
        IrresoluteMode::Pessimistic => {
            let (_, leaves) = forward(tree, &w)?;
            for e in tree.out_edges(&root) {
                let branch = format!("{root} -> {}", e.to);
                let closed = leaves
                    .iter()
                    .any(|l| l.path == branch || l.path.starts_with(&format!("{branch} -> ")));
                if !closed {
                    return Err(Error::ProofCheck {
                        path: format!("{root} -> {}", e.to),
                        message: "branch reaches no leaf".into(),
                    });
                }
                excluded.push((root.clone(), e.carried));
            }
        }
        IrresoluteMode::Optimistic => {
            let mut excl: BTreeMap<String, AltSet> = BTreeMap::new();
            for node in w.order.iter().rev() {
                let out: Vec<&ReversalEdge> = tree.out_edges(node).collect();
                let set = if out.is_empty() {
                    let leaf = tree
                        .leaves
                        .iter()
                        .find(|l| &l.profile == node)
                        .ok_or_else(|| Error::ProofCheck {
                            path: w.paths[node].clone(),
                            message: "branch ends without a leaf claim".into(),
                        })?;
                    all.difference(AltSet::singleton(leaf_winner(tree, &w, leaf)?))
                } else {
                    out.iter().fold(AltSet::empty(), |acc, e| {
                        let report = w.edge_reports.iter().find(|r| r.edge == e.name()).expect("walked");
                        let pulled = report
                            .steps
                            .iter()
                            .rev()
                            .fold(excl[&e.to], |set, s| down_interior(set, &s.truthful));
                        acc.union(pulled)
                    })
                };
                excl.insert(node.clone(), set);
                excluded.push((node.clone(), set));
            }
            let at_root = excl[&root];
            if at_root != all {
                return Err(Error::ProofCheck {
                    path: root,
                    message: format!(
                        "back-propagation leaves {} possible",
                        all.difference(at_root).format(&tree.labels)
                    ),
                });
            }
        }
    }
    let union = excluded
        .iter()
        .filter(|(n, _)| n == &root)
        .fold(AltSet::empty(), |acc, &(_, s)| acc.union(s));
    if union != all {
        return Err(Error::ProofCheck {
            path: root,
            message: format!("root exclusions miss {}", all.difference(union).format(&tree.labels)),
        });
    }
    Ok(IrresoluteReport {
        mode,
        excluded,
        conclusion: format!(
            "F({}) = {{}}: no set-valued Condorcet extension is {} half-way monotone for n={} m={}",
            tree.root_name(),
            mode,
            tree.n(),
            tree.m()
        ),
        labels: tree.labels.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefs::parse_order;

    fn l4() -> Labels {
        Labels::standard(4)
    }

    #[test]
    fn closures() {
        let l = l4();
        let o = parse_order("d>c>b>a", &l).unwrap();
        let ab = AltSet::parse("{a,b}", &l).unwrap();
        assert_eq!(down_closure(ab, &o), ab);
        let c = AltSet::parse("{c}", &l).unwrap();
        assert_eq!(down_closure(c, &o), AltSet::parse("{a,b,c}", &l).unwrap());
        assert_eq!(
            down_interior(AltSet::parse("{a,c}", &l).unwrap(), &o),
            AltSet::parse("{a}", &l).unwrap()
        );
        assert_eq!(down_interior(c, &o), AltSet::empty());
    }

    #[test]
    fn edge_checks() {
        let l = l4();
        let dcba = parse_order("d>c>b>a", &l).unwrap();
        let abcd = dcba.reverse();
        let from = Profile::new(4, vec![abcd, dcba, dcba]).unwrap();
        let to = Profile::new(4, vec![abcd, abcd, dcba]).unwrap();
        let good = ReversalEdge {
            from: "P".into(),
            to: "Q".into(),
            reversed: vec![(1, dcba)],
            carried: AltSet::parse("{a,b}", &l).unwrap(),
        };
        let r = verify_edge(&from, &to, &good, &l).unwrap();
        assert_eq!(r.steps.len(), 1);
        assert_eq!(r.steps[0].voter, 1);

        let top_carried = ReversalEdge {
            carried: AltSet::parse("{d}", &l).unwrap(),
            ..good.clone()
        };
        assert!(matches!(
            verify_edge(&from, &to, &top_carried, &l),
            Err(Error::TransportUnsound { voter: 1, .. })
        ));
        let too_many = ReversalEdge {
            reversed: vec![(3, dcba)],
            ..good.clone()
        };
        assert!(matches!(
            verify_edge(&from, &to, &too_many, &l),
            Err(Error::EdgeMismatch { .. })
        ));
        let wrong_to = Profile::new(4, vec![abcd, dcba, dcba]).unwrap();
        assert!(matches!(
            verify_edge(&from, &wrong_to, &good, &l),
            Err(Error::EdgeMismatch { .. })
        ));
    }
}
