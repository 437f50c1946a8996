//! Explicit look-up-table rules, keyed by profile index or by margin matrix.
//!
//! File format:
//!
//! ```text
//! n=3 m=3 mode=profile
//! 0,a
//! 1,a
//! ```
//!
//! In `c2` mode the key is the `_`-separated row-major margin matrix.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::prefs::{
    enumerate_orders, index_to_profile_with, profile_count, profile_to_index, Alternative, Labels, Profile,
    ProfileIndex,
};
use crate::tally::{margin_matrix, MarginMatrix};

use super::VotingRule;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableMode {
    Profile,
    C2,
}

impl fmt::Display for TableMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableMode::Profile => "profile",
            TableMode::C2 => "c2",
        })
    }
}

impl std::str::FromStr for TableMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<TableMode> {
        match s {
            "profile" => Ok(TableMode::Profile),
            "c2" => Ok(TableMode::C2),
            other => Err(Error::Parse {
                line: 0,
                message: format!("unknown mode `{other}`"),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[allow(clippy::large_enum_variant)]
pub enum TableKey {
    Profile(ProfileIndex),
    Margin(MarginMatrix),
}

impl fmt::Display for TableKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableKey::Profile(ix) => write!(f, "{}", ix.0),
            TableKey::Margin(mm) => f.write_str(&mm.key()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Entries {
    // 0xff marks a missing entry
    Dense(Vec<u8>),
    Margins(BTreeMap<MarginMatrix, Alternative>),
}

/// A voting rule given explicitly, one winner per key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleTable {
    n: usize,
    m: usize,
    entries: Entries,
}

const MISSING: u8 = u8::MAX;

impl RuleTable {
    /// An empty profile-mode table over all `(m!)^n` profiles.
    pub fn empty_profile(n: usize, m: usize) -> Result<RuleTable> {
        let total = profile_count(n, m).ok_or(Error::IndexOutOfRange(u128::MAX, n, m))?;
        let total = usize::try_from(total).map_err(|_| Error::IndexOutOfRange(total as u128, n, m))?;
        Ok(RuleTable {
            n,
            m,
            entries: Entries::Dense(vec![MISSING; total]),
        })
    }

    pub fn empty_c2(n: usize, m: usize) -> RuleTable {
        RuleTable {
            n,
            m,
            entries: Entries::Margins(BTreeMap::new()),
        }
    }

    /// Tabulates `rule` over every profile of the domain.
    pub fn from_rule(rule: &dyn VotingRule, n: usize, m: usize) -> Result<RuleTable> {
        let mut table = RuleTable::empty_profile(n, m)?;
        let orders = enumerate_orders(m)?;
        let total = profile_count(n, m).expect("checked above");
        for ix in 0..total {
            let p = index_to_profile_with(ProfileIndex(ix), n, &orders)?;
            table.set(TableKey::Profile(ProfileIndex(ix)), rule.winner(&p)?)?;
        }
        Ok(table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mode(&self) -> TableMode {
        match self.entries {
            Entries::Dense(_) => TableMode::Profile,
            Entries::Margins(_) => TableMode::C2,
        }
    }

    pub fn len(&self) -> usize {
        match &self.entries {
            Entries::Dense(v) => v.iter().filter(|&&a| a != MISSING).count(),
            Entries::Margins(map) => map.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn set(&mut self, key: TableKey, winner: Alternative) -> Result<()> {
        if winner.id() >= self.m {
            return Err(Error::UnknownLabel(winner.id().to_string()));
        }
        match (&mut self.entries, key) {
            (Entries::Dense(v), TableKey::Profile(ix)) => {
                let slot = v
                    .get_mut(ix.0 as usize)
                    .ok_or(Error::IndexOutOfRange(ix.0 as u128, self.n, self.m))?;
                *slot = winner.0;
            }
            (Entries::Margins(map), TableKey::Margin(mm)) => {
                map.insert(mm, winner);
            }
            (_, key) => return Err(Error::MissingEntry(format!("{key} does not match table mode"))),
        }
        Ok(())
    }

    pub fn get(&self, key: &TableKey) -> Result<Alternative> {
        let found = match (&self.entries, key) {
            (Entries::Dense(v), TableKey::Profile(ix)) => {
                v.get(ix.0 as usize).filter(|&&a| a != MISSING).map(|&a| Alternative(a))
            }
            (Entries::Margins(map), TableKey::Margin(mm)) => map.get(mm).copied(),
            _ => None,
        };
        found.ok_or_else(|| Error::MissingEntry(key.to_string()))
    }

    /// The key under which `profile` is looked up.
    pub fn key_of(&self, profile: &Profile) -> Result<TableKey> {
        if profile.n() != self.n || profile.m() != self.m {
            return Err(Error::DomainMismatch {
                n: profile.n(),
                m: profile.m(),
                table_n: self.n,
                table_m: self.m,
            });
        }
        Ok(match self.entries {
            Entries::Dense(_) => TableKey::Profile(profile_to_index(profile)?),
            Entries::Margins(_) => TableKey::Margin(margin_matrix(profile)),
        })
    }

    pub fn entries(&self) -> Vec<(TableKey, Alternative)> {
        match &self.entries {
            Entries::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != MISSING)
                .map(|(i, &a)| (TableKey::Profile(ProfileIndex(i as u64)), Alternative(a)))
                .collect(),
            Entries::Margins(map) => map.iter().map(|(k, &a)| (TableKey::Margin(*k), a)).collect(),
        }
    }

    /// Materialises a c2 table as a profile-mode table.
    pub fn to_profile_table(&self) -> Result<RuleTable> {
        match self.mode() {
            TableMode::Profile => Ok(self.clone()),
            TableMode::C2 => RuleTable::from_rule(self, self.n, self.m),
        }
    }

    pub fn to_text(&self) -> String {
        let labels = Labels::standard(self.m);
        let mut out = format!("n={} m={} mode={}\n", self.n, self.m, self.mode());
        for (key, a) in self.entries() {
            out.push_str(&format!("{},{}\n", key, labels.name(a)));
        }
        out
    }

    pub fn parse(text: &str) -> Result<RuleTable> {
        let mut table: Option<RuleTable> = None;
        let mut labels = Labels::standard(0);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            match &mut table {
                None => {
                    let (mut n, mut m, mut mode) = (None, None, None);
                    for field in line.split_whitespace() {
                        match field.split_once('=') {
                            Some(("n", v)) => n = v.parse::<usize>().ok(),
                            Some(("m", v)) => m = v.parse::<usize>().ok(),
                            Some(("mode", v)) => mode = Some(v.parse::<TableMode>().map_err(|e| perr(e.to_string()))?),
                            _ => return Err(perr(format!("unexpected header field `{field}`"))),
                        }
                    }
                    let (Some(n), Some(m), Some(mode)) = (n, m, mode) else {
                        return Err(perr("header must be `n=<int> m=<int> mode=profile|c2`".into()));
                    };
                    labels = Labels::standard(m);
                    table = Some(match mode {
                        TableMode::Profile => RuleTable::empty_profile(n, m).map_err(|e| perr(e.to_string()))?,
                        TableMode::C2 => RuleTable::empty_c2(n, m),
                    });
                }
                Some(t) => {
                    let (key, label) = line
                        .rsplit_once(',')
                        .ok_or_else(|| perr("expected `<key>,<label>`".into()))?;
                    let alt = labels.lookup(label.trim()).map_err(|e| perr(e.to_string()))?;
                    let key = match t.mode() {
                        TableMode::Profile => TableKey::Profile(ProfileIndex(
                            key.trim()
                                .parse()
                                .map_err(|_| perr(format!("bad profile index `{key}`")))?,
                        )),
                        TableMode::C2 => {
                            TableKey::Margin(MarginMatrix::from_key(key.trim(), t.n).map_err(|e| perr(e.to_string()))?)
                        }
                    };
                    t.set(key, alt).map_err(|e| perr(e.to_string()))?;
                }
            }
        }
        table.ok_or(Error::Parse {
            line: 0,
            message: "empty table file".into(),
        })
    }
}

pub fn rule_table_lookup(table: &RuleTable, profile: &Profile) -> Result<Alternative> {
    table.get(&table.key_of(profile)?)
}

impl VotingRule for RuleTable {
    fn name(&self) -> String {
        format!("table(n={},m={},{})", self.n, self.m, self.mode())
    }
    fn winner(&self, profile: &Profile) -> Result<Alternative> {
        rule_table_lookup(self, profile)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefs::LinearOrder;
    use crate::rules::{Maximin, TieBreak};

    #[test]
    fn profile_table_round_trip_and_lookup() {
        let rule = Maximin(TieBreak::lexicographic(3));
        let table = RuleTable::from_rule(&rule, 2, 3).unwrap();
        assert_eq!(table.len(), 36);
        let parsed = RuleTable::parse(&table.to_text()).unwrap();
        assert_eq!(parsed, table);
        let p = Profile::new(3, vec![LinearOrder::from_ids(&[2, 1, 0]); 2]).unwrap();
        assert_eq!(rule_table_lookup(&table, &p).unwrap(), Alternative(2));
        let wrong_n = Profile::new(3, vec![LinearOrder::identity(3); 3]).unwrap();
        assert!(matches!(
            rule_table_lookup(&table, &wrong_n),
            Err(Error::DomainMismatch { n: 3, table_n: 2, .. })
        ));
    }

    #[test]
    fn c2_table_keys_on_margins() {
        let mut table = RuleTable::empty_c2(2, 3);
        let abc = LinearOrder::identity(3);
        let cba = abc.reverse();
        let p = Profile::new(3, vec![abc, cba]).unwrap();
        let q = Profile::new(3, vec![cba, abc]).unwrap();
        table.set(table.key_of(&p).unwrap(), Alternative(1)).unwrap();
        assert_eq!(rule_table_lookup(&table, &q).unwrap(), Alternative(1));
        let r = Profile::new(3, vec![abc, abc]).unwrap();
        assert!(matches!(rule_table_lookup(&table, &r), Err(Error::MissingEntry(_))));
        assert_eq!(RuleTable::parse(&table.to_text()).unwrap(), table);
        assert_eq!(table.to_text(), "n=2 m=3 mode=c2\n0_0_0_0_0_0_0_0_0,b\n");
    }

    #[test]
    fn missing_profile_entry() {
        let table = RuleTable::empty_profile(1, 3).unwrap();
        let p = Profile::new(3, vec![LinearOrder::identity(3)]).unwrap();
        assert_eq!(rule_table_lookup(&table, &p), Err(Error::MissingEntry("0".into())));
    }
}
