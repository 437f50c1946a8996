//! Pairwise majority margins and Condorcet winners.

use crate::error::{Error, Result};
use crate::prefs::{Alternative, Labels, LinearOrder, Profile, MAX_ALTERNATIVES};

/// Skew-symmetric matrix of pairwise majority margins:
/// `margin(a, b) = |{i : a >_i b}| - |{i : b >_i a}|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarginMatrix {
    m: u8,
    n: u32,
    margin: [[i32; MAX_ALTERNATIVES]; MAX_ALTERNATIVES],
}

impl MarginMatrix {
    pub fn zero(m: usize) -> MarginMatrix {
        MarginMatrix {
            m: m as u8,
            n: 0,
            margin: [[0; MAX_ALTERNATIVES]; MAX_ALTERNATIVES],
        }
    }

    /// The contribution `M(o)` of a single vote.
    pub fn of_order(order: &LinearOrder) -> MarginMatrix {
        let mut mm = MarginMatrix::zero(order.m());
        mm.add_vote(order);
        mm
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn get(&self, a: Alternative, b: Alternative) -> i32 {
        self.margin[a.id()][b.id()]
    }

    /// Strict majority preference of `a` over `b`.
    pub fn beats(&self, a: Alternative, b: Alternative) -> bool {
        self.get(a, b) > 0
    }

    pub fn alternatives(&self) -> impl Iterator<Item = Alternative> + Clone {
        (0..self.m).map(Alternative)
    }

    pub fn add_vote(&mut self, order: &LinearOrder) {
        self.shift(order, 1);
        self.n += 1;
    }

    /// Removes one voter holding `order`; the caller guarantees one exists.
    pub fn remove_vote(&mut self, order: &LinearOrder) {
        self.shift(order, -1);
        self.n -= 1;
    }

    fn shift(&mut self, order: &LinearOrder, sign: i32) {
        let m = self.m();
        for p in 0..m {
            let a = order.at(p).id();
            for q in p + 1..m {
                let b = order.at(q).id();
                self.margin[a][b] += sign;
                self.margin[b][a] -= sign;
            }
        }
    }

    pub fn condorcet_winner(&self) -> Option<Alternative> {
        self.alternatives()
            .find(|&a| self.alternatives().all(|b| a == b || self.beats(a, b)))
    }

    /// Row-major entries joined by `_`, e.g. `0_1_-1_-1_0_1_1_-1_0`.
    pub fn key(&self) -> String {
        let m = self.m();
        let mut parts = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                parts.push(self.margin[a][b].to_string());
            }
        }
        parts.join("_")
    }

    /// Parses a [`MarginMatrix::key`] string; `n` is recorded as given and
    /// must match the parity of the entries.
    pub fn from_key(key: &str, n: usize) -> Result<MarginMatrix> {
        let bad = |msg: &str| Error::MissingEntry(format!("{key} ({msg})"));
        let values: Vec<i32> = key
            .split('_')
            .map(|s| s.parse::<i32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("not an integer list"))?;
        let m = (values.len() as f64).sqrt().round() as usize;
        if m * m != values.len() || m > MAX_ALTERNATIVES || m == 0 {
            return Err(bad("not a square matrix"));
        }
        let mut mm = MarginMatrix::zero(m);
        mm.n = n as u32;
        for a in 0..m {
            for b in 0..m {
                mm.margin[a][b] = values[a * m + b];
            }
        }
        if !mm.is_consistent() {
            return Err(bad("violates margin invariants"));
        }
        Ok(mm)
    }

    /// Skew-symmetry, zero diagonal, `|margin| <= n` and parity `margin = n (mod 2)`.
    pub fn is_consistent(&self) -> bool {
        let m = self.m();
        let n = self.n as i32;
        (0..m).all(|a| {
            self.margin[a][a] == 0
                && (0..m).filter(|&b| b != a).all(|b| {
                    let v = self.margin[a][b];
                    v == -self.margin[b][a] && v.abs() <= n && (v - n).rem_euclid(2) == 0
                })
        })
    }

    pub fn to_csv(&self, labels: &Labels) -> String {
        let mut out = String::from(",");
        out.push_str(&labels.names().join(","));
        out.push('\n');
        for a in self.alternatives() {
            out.push_str(labels.name(a));
            for b in self.alternatives() {
                out.push(',');
                out.push_str(&self.get(a, b).to_string());
            }
            out.push('\n');
        }
        out
    }
}

pub fn margin_matrix(profile: &Profile) -> MarginMatrix {
    let mut mm = MarginMatrix::zero(profile.m());
    for v in profile.voters() {
        mm.add_vote(v);
    }
    mm
}

pub fn condorcet_winner(profile: &Profile) -> Option<Alternative> {
    margin_matrix(profile).condorcet_winner()
}

/// Membership in the domain of profiles that admit a Condorcet winner.
pub fn condorcet_domain_member(profile: &Profile) -> bool {
    condorcet_winner(profile).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefs::{enumerate_orders, index_to_profile_with, parse_order, profile_count, ProfileIndex};

    fn cycle() -> Profile {
        let l = Labels::standard(3);
        let v = ["a>b>c", "b>c>a", "c>a>b"]
            .iter()
            .map(|s| parse_order(s, &l).unwrap())
            .collect();
        Profile::new(3, v).unwrap()
    }

    #[test]
    fn unanimous_margins() {
        let p = Profile::new(3, vec![LinearOrder::identity(3); 3]).unwrap();
        let mm = margin_matrix(&p);
        let (a, b, c) = (Alternative(0), Alternative(1), Alternative(2));
        assert_eq!((mm.get(a, b), mm.get(a, c), mm.get(b, c)), (3, 3, 3));
        assert_eq!(mm.condorcet_winner(), Some(a));
        assert!(condorcet_domain_member(&p));
    }

    #[test]
    fn three_cycle_has_no_winner() {
        assert_eq!(condorcet_winner(&cycle()), None);
        assert!(!condorcet_domain_member(&cycle()));
    }

    // Independent recount straight from the definition.
    fn recount(p: &Profile, a: Alternative, b: Alternative) -> i32 {
        let ab = p.voters().iter().filter(|o| o.prefers(a, b)).count() as i32;
        let ba = p.voters().iter().filter(|o| o.prefers(b, a)).count() as i32;
        ab - ba
    }

    #[test]
    fn invariants_exhaustive_m3() {
        let orders = enumerate_orders(3).unwrap();
        for n in 1..=4 {
            for ix in 0..profile_count(n, 3).unwrap() {
                let p = index_to_profile_with(ProfileIndex(ix), n, &orders).unwrap();
                let mm = margin_matrix(&p);
                assert!(mm.is_consistent());
                for a in mm.alternatives() {
                    for b in mm.alternatives() {
                        assert_eq!(mm.get(a, b), recount(&p, a, b));
                    }
                }
                if let Some(x) = mm.condorcet_winner() {
                    assert!(mm.alternatives().all(|b| b == x || recount(&p, x, b) > 0));
                }
                for i in 0..n {
                    let rev = margin_matrix(&p.reverse_voter(i).unwrap());
                    let vote = p.voter(i).unwrap();
                    for a in mm.alternatives() {
                        for b in mm.alternatives().filter(|&b| b != a) {
                            let s = if vote.prefers(a, b) { 1 } else { -1 };
                            assert_eq!(rev.get(a, b), mm.get(a, b) - 2 * s);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn key_round_trip_and_csv() {
        let mm = margin_matrix(&cycle());
        assert_eq!(mm.key(), "0_1_-1_-1_0_1_1_-1_0");
        assert_eq!(MarginMatrix::from_key(&mm.key(), 3).unwrap(), mm);
        assert!(MarginMatrix::from_key("0_2_-2_0", 3).is_err());
        assert_eq!(
            mm.to_csv(&Labels::standard(3)),
            ",a,b,c\na,0,1,-1\nb,-1,0,1\nc,1,-1,0\n"
        );
    }
}
