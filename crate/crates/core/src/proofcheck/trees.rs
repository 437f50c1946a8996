//! The two four-alternative reversal trees (odd and even electorates) and
//! the five-alternative strong reversal profile, as data.

use std::fmt;

use crate::error::{Error, Result};
use crate::prefs::{Alternative, Labels, LinearOrder, Profile};
use crate::rules::AltSet;
use crate::tally::condorcet_winner;

use super::{Leaf, ProofTree, ReversalEdge};

/// Tree over `a, b, c, d`; extra alternatives are appended at the bottom of
/// every vote and join every carried set.
// from, to, reversals, carried letters
type EdgeSpec = (
    &'static str,
    &'static str,
    &'static [(usize, &'static str)],
    &'static str,
);

struct TreeSpec {
    root: &'static [(usize, &'static str)],
    edges: &'static [EdgeSpec],
    leaves: &'static [(&'static str, char)],
}

const ODD: TreeSpec = TreeSpec {
    root: &[
        (1, "abcd"),
        (3, "abdc"),
        (3, "bdca"),
        (4, "cabd"),
        (2, "dcab"),
        (2, "dcba"),
    ],
    edges: &[
        ("P0", "P1", &[(1, "dcba")], "ab"),
        ("P1", "P2", &[(2, "bdca")], "a"),
        ("P1", "Q", &[(1, "dcab")], "b"),
        ("Q", "P3", &[(2, "cabd")], "bd"),
        ("P0", "P4", &[(1, "abcd")], "cd"),
        ("P4", "P5", &[(2, "cabd")], "d"),
        ("P4", "P6", &[(3, "abdc")], "c"),
    ],
    leaves: &[("P2", 'c'), ("P3", 'a'), ("P5", 'b'), ("P6", 'd')],
};

const EVEN: TreeSpec = TreeSpec {
    root: &[
        (2, "abcd"),
        (4, "abdc"),
        (6, "bdca"),
        (6, "cabd"),
        (4, "dcab"),
        (2, "dcba"),
    ],
    edges: &[
        ("P0", "P1", &[(2, "dcba")], "ab"),
        ("P1", "P2", &[(3, "bdca")], "a"),
        ("P1", "Q", &[(2, "dcab")], "b"),
        ("Q", "P3", &[(3, "cabd")], "bd"),
        ("P0", "P4", &[(2, "abcd")], "cd"),
        ("P4", "P5", &[(3, "cabd")], "d"),
        ("P4", "R", &[(2, "abdc")], "c"),
        ("R", "P6", &[(3, "bdca")], "ac"),
    ],
    leaves: &[("P2", 'c'), ("P3", 'a'), ("P5", 'b'), ("P6", 'd')],
};

/// `abdc` with the extra alternatives appended in label order.
fn padded_order(letters: &str, labels: &Labels) -> Result<LinearOrder> {
    let mut ranking: Vec<Alternative> = letters
        .chars()
        .map(|c| labels.lookup(&c.to_string()))
        .collect::<Result<_>>()?;
    ranking.extend((4..labels.m()).map(|i| Alternative(i as u8)));
    LinearOrder::from_ranking(&ranking)
}

fn build(spec: &TreeSpec, m: usize) -> Result<ProofTree> {
    if m < 4 {
        return Err(Error::MTooSmall(m, 4));
    }
    let labels = Labels::standard(m);
    let extra: AltSet = (4..m).map(|i| Alternative(i as u8)).collect();
    let columns: Vec<(usize, LinearOrder)> = spec
        .root
        .iter()
        .map(|&(c, o)| Ok((c, padded_order(o, &labels)?)))
        .collect::<Result<_>>()?;
    let mut profiles = vec![("P0".to_string(), Profile::from_columns(m, &columns)?)];
    let mut edges = Vec::new();
    for &(from, to, reversed, carried) in spec.edges {
        let reversed: Vec<(usize, LinearOrder)> = reversed
            .iter()
            .map(|&(c, o)| Ok((c, padded_order(o, &labels)?)))
            .collect::<Result<_>>()?;
        let carried = carried
            .chars()
            .map(|c| labels.lookup(&c.to_string()))
            .collect::<Result<AltSet>>()?
            .union(extra);
        let mut p = profiles
            .iter()
            .find(|(n, _)| n == from)
            .map(|(_, p)| p.clone())
            .expect("parents precede children in the spec");
        for &(count, order) in &reversed {
            for _ in 0..count {
                let i = p.voters().iter().position(|v| *v == order).expect("spec voter exists");
                p = p.reverse_voter(i)?;
            }
        }
        profiles.push((to.to_string(), p));
        edges.push(ReversalEdge {
            from: from.into(),
            to: to.into(),
            reversed,
            carried,
        });
    }
    let leaves = spec
        .leaves
        .iter()
        .map(|&(p, c)| {
            Ok(Leaf {
                profile: p.into(),
                condorcet: labels.lookup(&c.to_string())?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ProofTree {
        labels,
        profiles,
        edges,
        leaves,
    })
}

/// The 15-voter tree; valid for every `m >= 4`.
pub fn build_odd_tree(m: usize) -> Result<ProofTree> {
    build(&ODD, m)
}

/// The 24-voter tree; valid for every `m >= 4`.
pub fn build_even_tree(m: usize) -> Result<ProofTree> {
    build(&EVEN, m)
}

const PEREZ_LABELS: [&str; 5] = ["x", "y", "z", "u", "t"];
const PEREZ_COLUMNS: [(usize, &str); 10] = [
    (5, "xzytu"),
    (7, "xtuzy"),
    (3, "yxuzt"),
    (6, "yxtuz"),
    (1, "yuzxt"),
    (2, "ytuxz"),
    (3, "zyuxt"),
    (5, "zytxu"),
    (8, "uztyx"),
    (1, "tyzux"),
];
// reversing all voters of this order makes the case alternative lose
const PEREZ_CASES: [&str; 4] = ["uztyx", "xtuzy", "yxtuz", "xzytu"];

fn perez_order(letters: &str, labels: &Labels) -> Result<LinearOrder> {
    let ranking: Vec<Alternative> = letters
        .chars()
        .map(|c| labels.lookup(&c.to_string()))
        .collect::<Result<_>>()?;
    LinearOrder::from_ranking(&ranking)
}

/// The 41-voter profile over `x, y, z, u, t`.
pub fn build_perez_profile() -> (Labels, Profile) {
    let labels = Labels::new(PEREZ_LABELS).expect("distinct labels");
    let columns: Vec<(usize, LinearOrder)> = PEREZ_COLUMNS
        .iter()
        .map(|&(c, o)| (c, perez_order(o, &labels).expect("valid order")))
        .collect();
    let profile = Profile::from_columns(5, &columns).expect("valid profile");
    (labels, profile)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerezCase {
    /// Outcome assumed at the root.
    pub assumed: Alternative,
    pub count: usize,
    pub order: LinearOrder,
    pub condorcet_after: Alternative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerezReport {
    pub cases: Vec<PerezCase>,
    /// The only outcome no case rules out.
    pub forced: Alternative,
    labels: Labels,
}

impl fmt::Display for PerezReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = &self.labels;
        writeln!(f, "P has no Condorcet winner")?;
        for c in &self.cases {
            writeln!(
                f,
                "case {}: reverse {} {} -> Condorcet winner {}",
                l.name(c.assumed),
                c.count,
                c.order.compact(l),
                l.name(c.condorcet_after)
            )?;
        }
        write!(
            f,
            "a Condorcet extension avoiding the strong reversal paradox must choose {}",
            l.name(self.forced)
        )
    }
}

/// Checks the case analysis on the 41-voter profile. If `f(P) = w` for the
/// alternative `w` at the bottom of a case order, each of those voters, once
/// reversed, has `w` on top; so `w` must stay the outcome as they reverse one
/// by one, or reversing back would be a strong paradox. The profile reached
/// has a different Condorcet winner.
pub fn verify_perez() -> Result<PerezReport> {
    let (labels, profile) = build_perez_profile();
    let fail = |message: String| Error::ProofCheck {
        path: "perez".into(),
        message,
    };
    if let Some(x) = condorcet_winner(&profile) {
        return Err(fail(format!("root has Condorcet winner {}", labels.name(x))));
    }
    let mut cases = Vec::new();
    let mut ruled_out = AltSet::empty();
    for letters in PEREZ_CASES {
        let order = perez_order(letters, &labels)?;
        let assumed = order.bottom();
        let mut p = profile.clone();
        let positions: Vec<usize> = (0..p.n()).filter(|&i| p.voters()[i] == order).collect();
        for &i in &positions {
            p = p.reverse_voter(i)?;
        }
        match condorcet_winner(&p) {
            Some(x) if x != assumed => {
                ruled_out.insert(assumed);
                cases.push(PerezCase {
                    assumed,
                    count: positions.len(),
                    order,
                    condorcet_after: x,
                });
            }
            other => {
                return Err(fail(format!(
                    "reversing {} leaves Condorcet winner {}",
                    letters,
                    other.map_or("none", |x| labels.name(x))
                )))
            }
        }
    }
    let left: Vec<Alternative> = AltSet::full(5).difference(ruled_out).iter().collect();
    match left.as_slice() {
        [forced] => Ok(PerezReport {
            cases,
            forced: *forced,
            labels,
        }),
        _ => Err(fail(format!("{} alternatives survive the case analysis", left.len()))),
    }
}
