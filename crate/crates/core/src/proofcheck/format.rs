//! Text format for proof trees:
//!
//! ```text
//! 15 4 labels=a,b,c,d
//! PROFILE P0
//! 1: a>b>c>d
//! 3: a>b>d>c
//! END
//! EDGE P0 P1 REVERSE 1xd>c>b>a CARRY a,b
//! LEAF P2 CONDORCET c
//! ```
//!
//! The first profile block is the root. `labels=` is optional.

use crate::error::{Error, Result};
use crate::prefs::{parse_order, Labels, LinearOrder, Profile};
use crate::rules::AltSet;

use super::{Leaf, ProofTree, ReversalEdge};

pub fn write_proof_tree(tree: &ProofTree) -> String {
    let l = &tree.labels;
    let mut out = format!("{} {} labels={}\n", tree.n(), tree.m(), l.names().join(","));
    for (name, p) in &tree.profiles {
        out.push_str(&format!("PROFILE {name}\n"));
        for (count, order) in p.columns() {
            out.push_str(&format!("{}: {}\n", count, order.format(l)));
        }
        out.push_str("END\n");
    }
    for e in &tree.edges {
        let reversed: Vec<String> = e
            .reversed
            .iter()
            .map(|(c, o)| format!("{}x{}", c, o.format(l)))
            .collect();
        let carried: Vec<&str> = e.carried.iter().map(|a| l.name(a)).collect();
        out.push_str(&format!(
            "EDGE {} {} REVERSE {} CARRY {}\n",
            e.from,
            e.to,
            reversed.join(" "),
            carried.join(",")
        ));
    }
    for leaf in &tree.leaves {
        out.push_str(&format!("LEAF {} CONDORCET {}\n", leaf.profile, l.name(leaf.condorcet)));
    }
    out
}

pub fn parse_proof_tree(text: &str) -> Result<ProofTree> {
    let mut header: Option<(usize, Labels)> = None;
    let mut profiles: Vec<(String, Profile)> = Vec::new();
    let mut edges = Vec::new();
    let mut leaves = Vec::new();
    // name and votes of the profile block being read
    let mut open: Option<(String, Vec<LinearOrder>)> = None;
    let mut last = 0;

    for (lineno, raw) in text.lines().enumerate() {
        last = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let perr = |message: String| Error::Parse {
            line: lineno + 1,
            message,
        };
        let Some((n, labels)) = &header else {
            header = Some(parse_header(line).map_err(|e| perr(e.to_string()))?);
            continue;
        };
        let m = labels.m();
        if let Some((name, votes)) = &mut open {
            if line == "END" {
                if votes.len() != *n {
                    return Err(perr(format!(
                        "profile {name} has {} voters, header says {n}",
                        votes.len()
                    )));
                }
                let p = Profile::new(m, std::mem::take(votes)).map_err(|e| perr(e.to_string()))?;
                profiles.push((name.clone(), p));
                open = None;
                continue;
            }
            let (count, order) = line
                .split_once(':')
                .ok_or_else(|| perr("expected `<count>: <order>` or END".into()))?;
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| perr(format!("bad count `{}`", count.trim())))?;
            let order = parse_order(order, labels).map_err(|e| perr(e.to_string()))?;
            votes.extend(std::iter::repeat_n(order, count));
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["PROFILE", name] => {
                if profiles.iter().any(|(n, _)| n == name) {
                    return Err(perr(format!("duplicate profile `{name}`")));
                }
                open = Some((name.to_string(), Vec::new()));
            }
            ["EDGE", from, to, "REVERSE", rest @ ..] => {
                let carry_at = rest
                    .iter()
                    .position(|&w| w == "CARRY")
                    .ok_or_else(|| perr("edge lacks CARRY".into()))?;
                let (reversals, carry) = rest.split_at(carry_at);
                if reversals.is_empty() {
                    return Err(perr("edge reverses nobody".into()));
                }
                let reversed = reversals
                    .iter()
                    .map(|r| {
                        let (count, order) = r
                            .split_once('x')
                            .ok_or_else(|| perr(format!("expected `<count>x<order>`, found `{r}`")))?;
                        let count: usize = count.parse().map_err(|_| perr(format!("bad count in `{r}`")))?;
                        Ok((count, parse_order(order, labels).map_err(|e| perr(e.to_string()))?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let carried = AltSet::parse(&carry[1..].concat(), labels).map_err(|e| perr(e.to_string()))?;
                edges.push(ReversalEdge {
                    from: from.to_string(),
                    to: to.to_string(),
                    reversed,
                    carried,
                });
            }
            ["LEAF", profile, "CONDORCET", label] => leaves.push(Leaf {
                profile: profile.to_string(),
                condorcet: labels.lookup(label).map_err(|e| perr(e.to_string()))?,
            }),
            _ => return Err(perr(format!("unrecognised line `{line}`"))),
        }
    }
    let eof = |message: &str| Error::Parse {
        line: last,
        message: message.into(),
    };
    if open.is_some() {
        return Err(eof("profile block without END"));
    }
    let (_, labels) = header.ok_or_else(|| eof("missing `<n> <m>` header"))?;
    if profiles.is_empty() {
        return Err(eof("no profiles"));
    }
    Ok(ProofTree {
        labels,
        profiles,
        edges,
        leaves,
    })
}

fn parse_header(line: &str) -> Result<(usize, Labels)> {
    let bad = |message: String| Error::Parse { line: 0, message };
    let words: Vec<&str> = line.split_whitespace().collect();
    let (n, m, rest) = match words.as_slice() {
        [n, m, rest @ ..] => (*n, *m, rest),
        _ => return Err(bad("header must be `<n> <m> [labels=...]`".into())),
    };
    let n: usize = n.parse().map_err(|_| bad(format!("bad n `{n}`")))?;
    let m: usize = m.parse().map_err(|_| bad(format!("bad m `{m}`")))?;
    let labels = match rest {
        [] => Labels::standard(m),
        [l] => Labels::new(
            l.strip_prefix("labels=")
                .ok_or_else(|| bad(format!("unexpected `{l}`")))?
                .split(','),
        )?,
        _ => return Err(bad("trailing header fields".into())),
    };
    if labels.m() != m {
        return Err(Error::AlternativeCountMismatch {
            expected: m,
            found: labels.m(),
        });
    }
    Ok((n, labels))
}
