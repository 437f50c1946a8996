//! Alternatives, linear orders and profiles.
//!
//! Orders over `m` alternatives are enumerated lexicographically by
//! alternative id, so order index 0 is the identity ranking `0 > 1 > ... > m-1`.
//! A profile is an ordered sequence of votes (voter `i` at position `i`) and
//! maps to a [`ProfileIndex`] by treating each vote's order index as a digit
//! in base `m!`, voter 0 most significant.

use std::fmt;

use crate::error::{Error, Result};

/// Largest number of alternatives any order can hold.
pub const MAX_ALTERNATIVES: usize = 8;

/// An alternative, identified by its id `0..m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alternative(pub u8);

impl Alternative {
    pub fn id(self) -> usize {
        self.0 as usize
    }
}

/// Display names for the alternatives of one election.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labels {
    names: Vec<String>,
}

impl Labels {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Labels> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_ALTERNATIVES {
            return Err(Error::MTooLarge(names.len(), MAX_ALTERNATIVES));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.contains(['>', ',', ' ', '{', '}']) {
                return Err(Error::UnknownLabel(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(Error::DuplicateLabel(name.clone()));
            }
        }
        Ok(Labels { names })
    }

    /// `a, b, c, d` followed by `x1, x2, ...` for the alternatives beyond the
    /// fourth.
    pub fn standard(m: usize) -> Labels {
        let names = (0..m)
            .map(|i| match i {
                0..=3 => ((b'a' + i as u8) as char).to_string(),
                _ => format!("x{}", i - 3),
            })
            .collect();
        Labels { names }
    }

    pub fn m(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, a: Alternative) -> &str {
        &self.names[a.id()]
    }

    pub fn find(&self, label: &str) -> Option<Alternative> {
        self.names.iter().position(|n| n == label).map(|i| Alternative(i as u8))
    }

    pub fn lookup(&self, label: &str) -> Result<Alternative> {
        self.find(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// A strict ranking of all `m` alternatives, best first.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct LinearOrder {
    m: u8,
    ranking: [u8; MAX_ALTERNATIVES],
    position: [u8; MAX_ALTERNATIVES],
}

impl LinearOrder {
    pub fn from_ranking(ranking: &[Alternative]) -> Result<LinearOrder> {
        let m = ranking.len();
        if m > MAX_ALTERNATIVES {
            return Err(Error::MTooLarge(m, MAX_ALTERNATIVES));
        }
        let mut order = LinearOrder {
            m: m as u8,
            ranking: [0; MAX_ALTERNATIVES],
            position: [u8::MAX; MAX_ALTERNATIVES],
        };
        for (pos, &a) in ranking.iter().enumerate() {
            if a.id() >= m {
                return Err(Error::UnknownLabel(a.id().to_string()));
            }
            if order.position[a.id()] != u8::MAX {
                return Err(Error::DuplicateLabel(a.id().to_string()));
            }
            order.ranking[pos] = a.0;
            order.position[a.id()] = pos as u8;
        }
        Ok(order)
    }

    /// Convenience constructor from raw ids; panics on an invalid ranking.
    pub fn from_ids(ids: &[u8]) -> LinearOrder {
        let alts: Vec<Alternative> = ids.iter().map(|&i| Alternative(i)).collect();
        LinearOrder::from_ranking(&alts).expect("ids must form a permutation")
    }

    pub fn identity(m: usize) -> LinearOrder {
        let ids: Vec<u8> = (0..m as u8).collect();
        LinearOrder::from_ids(&ids)
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn ranking(&self) -> impl DoubleEndedIterator<Item = Alternative> + ExactSizeIterator + '_ {
        self.ranking[..self.m()].iter().map(|&a| Alternative(a))
    }

    pub fn at(&self, pos: usize) -> Alternative {
        assert!(pos < self.m());
        Alternative(self.ranking[pos])
    }

    pub fn top(&self) -> Alternative {
        self.at(0)
    }

    pub fn bottom(&self) -> Alternative {
        self.at(self.m() - 1)
    }

    /// 0-based rank of `a` (0 = most preferred).
    pub fn position(&self, a: Alternative) -> usize {
        self.position[a.id()] as usize
    }

    /// True iff `a` is strictly preferred to `b`.
    pub fn prefers(&self, a: Alternative, b: Alternative) -> bool {
        self.position[a.id()] < self.position[b.id()]
    }

    pub fn reverse(&self) -> LinearOrder {
        let mut out = *self;
        let m = self.m();
        for pos in 0..m {
            let a = self.ranking[m - 1 - pos];
            out.ranking[pos] = a;
            out.position[a as usize] = pos as u8;
        }
        out
    }

    /// Lexicographic rank among all `m!` orders.
    pub fn index(&self) -> usize {
        let m = self.m();
        let mut idx = 0;
        for pos in 0..m {
            let smaller_later = (pos + 1..m).filter(|&q| self.ranking[q] < self.ranking[pos]).count();
            idx += smaller_later * factorial(m - 1 - pos);
        }
        idx
    }

    pub fn from_index(index: usize, m: usize) -> Result<LinearOrder> {
        if m > MAX_ALTERNATIVES {
            return Err(Error::MTooLarge(m, MAX_ALTERNATIVES));
        }
        if index >= factorial(m) {
            return Err(Error::IndexOutOfRange(index as u128, 1, m));
        }
        let mut pool: Vec<u8> = (0..m as u8).collect();
        let mut rest = index;
        let mut ids = Vec::with_capacity(m);
        for pos in 0..m {
            let f = factorial(m - 1 - pos);
            ids.push(pool.remove(rest / f));
            rest %= f;
        }
        Ok(LinearOrder::from_ids(&ids))
    }

    /// The ranking written with labels, e.g. `a>b>c`.
    pub fn format(&self, labels: &Labels) -> String {
        self.ranking().map(|a| labels.name(a)).collect::<Vec<_>>().join(">")
    }

    /// The ranking as concatenated labels, e.g. `abdc`; only unambiguous
    /// when every label is a single character.
    pub fn compact(&self, labels: &Labels) -> String {
        self.ranking().map(|a| labels.name(a)).collect()
    }
}

impl fmt::Debug for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearOrder(")?;
        for (i, a) in self.ranking().enumerate() {
            if i > 0 {
                write!(f, ">")?;
            }
            write!(f, "{}", a.0)?;
        }
        write!(f, ")")
    }
}

pub fn factorial(m: usize) -> usize {
    (1..=m).product()
}

/// Parses `a>b>c>d` (whitespace tolerated) against the given labels.
pub fn parse_order(text: &str, labels: &Labels) -> Result<LinearOrder> {
    let mut seen = vec![false; labels.m()];
    let mut ranking = Vec::with_capacity(labels.m());
    for token in text.split('>') {
        let token = token.trim();
        let a = labels.lookup(token)?;
        if seen[a.id()] {
            return Err(Error::DuplicateLabel(token.to_string()));
        }
        seen[a.id()] = true;
        ranking.push(a);
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::MissingAlternative(
            labels.name(Alternative(missing as u8)).to_string(),
        ));
    }
    LinearOrder::from_ranking(&ranking)
}

/// All `m!` orders in lexicographic order.
pub fn enumerate_orders(m: usize) -> Result<Vec<LinearOrder>> {
    if m > MAX_ALTERNATIVES {
        return Err(Error::MTooLarge(m, MAX_ALTERNATIVES));
    }
    if m == 0 {
        return Err(Error::MTooSmall(0, 1));
    }
    let mut current: Vec<u8> = (0..m as u8).collect();
    let mut out = Vec::with_capacity(factorial(m));
    loop {
        out.push(LinearOrder::from_ids(&current));
        if !next_permutation(&mut current) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation(v: &mut [u8]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Position of a profile in the canonical enumeration of `(m!)^n` profiles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProfileIndex(pub u64);

/// Number of profiles `(m!)^n`, if it fits in 64 bits.
pub fn profile_count(n: usize, m: usize) -> Option<u64> {
    let base = factorial(m) as u64;
    (0..n).try_fold(1u64, |acc, _| acc.checked_mul(base))
}

pub fn profile_to_index(profile: &Profile) -> Result<ProfileIndex> {
    let base = factorial(profile.m()) as u64;
    let overflow = || Error::IndexOutOfRange(u128::MAX, profile.n(), profile.m());
    let mut value = 0u64;
    for vote in &profile.voters {
        value = value
            .checked_mul(base)
            .and_then(|v| v.checked_add(vote.index() as u64))
            .ok_or_else(overflow)?;
    }
    Ok(ProfileIndex(value))
}

pub fn index_to_profile(ix: ProfileIndex, n: usize, m: usize) -> Result<Profile> {
    let orders = enumerate_orders(m)?;
    index_to_profile_with(ix, n, &orders)
}

/// Like [`index_to_profile`] but reuses a precomputed order list.
pub fn index_to_profile_with(ix: ProfileIndex, n: usize, orders: &[LinearOrder]) -> Result<Profile> {
    let m = orders[0].m();
    let total = profile_count(n, m).ok_or(Error::IndexOutOfRange(ix.0 as u128, n, m))?;
    if n == 0 {
        return Err(Error::EmptyProfile);
    }
    if ix.0 >= total {
        return Err(Error::IndexOutOfRange(ix.0 as u128, n, m));
    }
    let base = orders.len() as u64;
    let mut rest = ix.0;
    let mut voters = vec![orders[0]; n];
    for slot in voters.iter_mut().rev() {
        *slot = orders[(rest % base) as usize];
        rest /= base;
    }
    Ok(Profile { m, voters })
}

/// An ordered assignment of one vote per voter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Profile {
    m: usize,
    voters: Vec<LinearOrder>,
}

impl Profile {
    pub fn new(m: usize, voters: Vec<LinearOrder>) -> Result<Profile> {
        if voters.is_empty() {
            return Err(Error::EmptyProfile);
        }
        for v in &voters {
            if v.m() != m {
                return Err(Error::AlternativeCountMismatch {
                    expected: m,
                    found: v.m(),
                });
            }
        }
        Ok(Profile { m, voters })
    }

    /// Expands `(count, order)` columns into consecutive voter positions.
    pub fn from_columns(m: usize, columns: &[(usize, LinearOrder)]) -> Result<Profile> {
        let voters = columns
            .iter()
            .flat_map(|&(count, order)| std::iter::repeat_n(order, count))
            .collect();
        Profile::new(m, voters)
    }

    pub fn n(&self) -> usize {
        self.voters.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn voters(&self) -> &[LinearOrder] {
        &self.voters
    }

    pub fn voter(&self, i: usize) -> Result<LinearOrder> {
        self.voters.get(i).copied().ok_or(Error::VoterOutOfRange(i, self.n()))
    }

    fn check_order(&self, order: &LinearOrder) -> Result<()> {
        if order.m() != self.m {
            return Err(Error::AlternativeCountMismatch {
                expected: self.m,
                found: order.m(),
            });
        }
        Ok(())
    }

    pub fn replace_vote(&self, i: usize, order: LinearOrder) -> Result<Profile> {
        self.voter(i)?;
        self.check_order(&order)?;
        let mut out = self.clone();
        out.voters[i] = order;
        Ok(out)
    }

    /// Voter `i` submits the reverse of their current vote.
    pub fn reverse_voter(&self, i: usize) -> Result<Profile> {
        let v = self.voter(i)?;
        self.replace_vote(i, v.reverse())
    }

    pub fn remove_voter(&self, i: usize) -> Result<Profile> {
        self.voter(i)?;
        if self.n() == 1 {
            return Err(Error::EmptyProfile);
        }
        let mut out = self.clone();
        out.voters.remove(i);
        Ok(out)
    }

    pub fn add_voter(&self, order: LinearOrder) -> Result<Profile> {
        self.check_order(&order)?;
        let mut out = self.clone();
        out.voters.push(order);
        Ok(out)
    }

    /// Inserts a voter so that they end up at position `i`.
    pub fn insert_voter(&self, i: usize, order: LinearOrder) -> Result<Profile> {
        if i > self.n() {
            return Err(Error::VoterOutOfRange(i, self.n()));
        }
        self.check_order(&order)?;
        let mut out = self.clone();
        out.voters.insert(i, order);
        Ok(out)
    }

    /// Appends `order` and its reverse.
    pub fn pad(&self, order: LinearOrder) -> Result<Profile> {
        self.add_voter(order)?.add_voter(order.reverse())
    }

    /// Runs of identical consecutive votes as `(count, order)`.
    pub fn columns(&self) -> Vec<(usize, LinearOrder)> {
        let mut out: Vec<(usize, LinearOrder)> = Vec::new();
        for &v in &self.voters {
            match out.last_mut() {
                Some((count, last)) if *last == v => *count += 1,
                _ => out.push((1, v)),
            }
        }
        out
    }

    /// Number of voters submitting each order, keyed by order, in first
    /// appearance order.
    pub fn order_counts(&self) -> Vec<(LinearOrder, usize)> {
        let mut out: Vec<(LinearOrder, usize)> = Vec::new();
        for &v in &self.voters {
            match out.iter_mut().find(|(o, _)| *o == v) {
                Some((_, c)) => *c += 1,
                None => out.push((v, 1)),
            }
        }
        out
    }

    /// Same votes, compared as multisets.
    pub fn same_multiset(&self, other: &Profile) -> bool {
        let mut a: Vec<usize> = self.voters.iter().map(|o| o.index()).collect();
        let mut b: Vec<usize> = other.voters.iter().map(|o| o.index()).collect();
        a.sort_unstable();
        b.sort_unstable();
        self.m == other.m && a == b
    }

    /// Renders the profile in the text file format.
    pub fn to_text(&self, labels: &Labels) -> String {
        let mut out = format!("m={} labels={}\n", self.m, labels.names().join(","));
        for (count, order) in self.columns() {
            out.push_str(&format!("{}: {}\n", count, order.format(labels)));
        }
        out
    }

    /// Single-line rendering, e.g. `1:a>b>c 2:c>b>a`.
    pub fn to_inline(&self, labels: &Labels) -> String {
        self.columns()
            .iter()
            .map(|(c, o)| format!("{}:{}", c, o.format(labels)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Parses the profile text format:
///
/// ```text
/// # optional comments
/// m=4 labels=a,b,c,d
/// 3: a>b>d>c
/// 2: d>c>b>a
/// ```
///
/// `labels=` may be omitted, in which case the standard labels are used.
pub fn parse_profile_text(text: &str) -> Result<(Labels, Profile)> {
    let mut labels: Option<Labels> = None;
    let mut voters = Vec::new();
    let mut last_line = 0;
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let perr = |message: String| Error::Parse { line: line_no, message };
        match &labels {
            None => labels = Some(parse_header(line).map_err(|e| perr(e.to_string()))?),
            Some(lab) => {
                let (count, order) = line
                    .split_once(':')
                    .ok_or_else(|| perr("expected `<count>: <order>`".into()))?;
                let count: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| perr(format!("bad count `{}`", count.trim())))?;
                let order = parse_order(order, lab).map_err(|e| perr(e.to_string()))?;
                voters.extend(std::iter::repeat_n(order, count));
            }
        }
    }
    let labels = labels.ok_or(Error::Parse {
        line: last_line,
        message: "missing `m=<int> labels=...` header".into(),
    })?;
    let profile = Profile::new(labels.m(), voters).map_err(|e| Error::Parse {
        line: last_line,
        message: e.to_string(),
    })?;
    Ok((labels, profile))
}

fn parse_header(line: &str) -> Result<Labels> {
    let mut m: Option<usize> = None;
    let mut labels: Option<Labels> = None;
    for field in line.split_whitespace() {
        if let Some(v) = field.strip_prefix("m=") {
            m = Some(v.parse().map_err(|_| Error::Parse {
                line: 0,
                message: format!("bad m `{v}`"),
            })?);
        } else if let Some(v) = field.strip_prefix("labels=") {
            labels = Some(Labels::new(v.split(','))?);
        } else {
            return Err(Error::Parse {
                line: 0,
                message: format!("unexpected header field `{field}`"),
            });
        }
    }
    let m = m.ok_or(Error::Parse {
        line: 0,
        message: "header lacks m=".into(),
    })?;
    if m > MAX_ALTERNATIVES {
        return Err(Error::MTooLarge(m, MAX_ALTERNATIVES));
    }
    let labels = labels.unwrap_or_else(|| Labels::standard(m));
    if labels.m() != m {
        return Err(Error::AlternativeCountMismatch {
            expected: m,
            found: labels.m(),
        });
    }
    Ok(labels)
}
