//! Variable numbering and the sidecar map file.
//!
//! ```text
//! c n=3 m=3 mode=profile labels=a,b,c
//! 1 0 a
//! 2 0 b
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::prefs::{profile_count, Alternative, Labels};
use crate::tally::MarginMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EncodingMode {
    Profile,
    C2,
    /// Named profiles of a proof tree.
    Proof,
}

impl fmt::Display for EncodingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncodingMode::Profile => "profile",
            EncodingMode::C2 => "c2",
            EncodingMode::Proof => "proof",
        })
    }
}

impl FromStr for EncodingMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<EncodingMode> {
        match s {
            "profile" => Ok(EncodingMode::Profile),
            "c2" => Ok(EncodingMode::C2),
            "proof" => Ok(EncodingMode::Proof),
            other => Err(Error::Parse {
                line: 0,
                message: format!("unknown mode `{other}`"),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Keys {
    /// Profile indices `0..count`.
    Dense(u64),
    Margins(Vec<MarginMatrix>),
    Named(Vec<String>),
}

/// Bijection between `(key index, alternative)` and `1..=keys*m`, with
/// `id = key_index * m + alt + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableMap {
    n: usize,
    labels: Labels,
    keys: Keys,
}

impl VariableMap {
    pub fn profiles(n: usize, m: usize) -> Result<VariableMap> {
        let count = profile_count(n, m).ok_or(Error::IndexOutOfRange(u128::MAX, n, m))?;
        Ok(VariableMap {
            n,
            labels: Labels::standard(m),
            keys: Keys::Dense(count),
        })
    }

    /// `keys` must be sorted and distinct.
    pub fn margins(n: usize, m: usize, keys: Vec<MarginMatrix>) -> VariableMap {
        debug_assert!(keys.windows(2).all(|w| w[0] < w[1]));
        VariableMap {
            n,
            labels: Labels::standard(m),
            keys: Keys::Margins(keys),
        }
    }

    pub fn named(n: usize, labels: Labels, names: Vec<String>) -> VariableMap {
        VariableMap {
            n,
            labels,
            keys: Keys::Named(names),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.labels.m()
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn mode(&self) -> EncodingMode {
        match self.keys {
            Keys::Dense(_) => EncodingMode::Profile,
            Keys::Margins(_) => EncodingMode::C2,
            Keys::Named(_) => EncodingMode::Proof,
        }
    }

    pub fn num_keys(&self) -> usize {
        match &self.keys {
            Keys::Dense(c) => *c as usize,
            Keys::Margins(v) => v.len(),
            Keys::Named(v) => v.len(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_keys() * self.m()
    }

    pub fn var(&self, key: usize, alt: Alternative) -> i32 {
        debug_assert!(key < self.num_keys() && alt.id() < self.m());
        (key * self.m() + alt.id() + 1) as i32
    }

    /// Inverse of [`VariableMap::var`].
    pub fn decode_var(&self, var: usize) -> Option<(usize, Alternative)> {
        if var == 0 || var > self.num_vars() {
            return None;
        }
        let v = var - 1;
        Some((v / self.m(), Alternative((v % self.m()) as u8)))
    }

    pub fn key_name(&self, key: usize) -> String {
        match &self.keys {
            Keys::Dense(_) => key.to_string(),
            Keys::Margins(v) => v[key].key(),
            Keys::Named(v) => v[key].clone(),
        }
    }

    pub fn margin_key(&self, key: usize) -> Option<&MarginMatrix> {
        match &self.keys {
            Keys::Margins(v) => v.get(key),
            _ => None,
        }
    }

    pub fn margin_index(&self, mm: &MarginMatrix) -> Option<usize> {
        match &self.keys {
            Keys::Margins(v) => v.binary_search(mm).ok(),
            _ => None,
        }
    }

    pub fn name_index(&self, name: &str) -> Option<usize> {
        match &self.keys {
            Keys::Named(v) => v.iter().position(|n| n == name),
            _ => None,
        }
    }

    pub fn to_sidecar(&self) -> String {
        let mut out = format!(
            "c n={} m={} mode={} labels={}\n",
            self.n,
            self.m(),
            self.mode(),
            self.labels.names().join(",")
        );
        for key in 0..self.num_keys() {
            let name = self.key_name(key);
            for a in 0..self.m() {
                let alt = Alternative(a as u8);
                out.push_str(&format!("{} {} {}\n", self.var(key, alt), name, self.labels.name(alt)));
            }
        }
        out
    }

    pub fn parse_sidecar(text: &str) -> Result<VariableMap> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let perr = |line: usize, message: String| Error::Parse { line, message };
        let (_, header) = lines.next().ok_or_else(|| perr(1, "empty map file".into()))?;
        let (mut n, mut m, mut mode, mut labels) = (None, None, None, None);
        for field in header.trim().strip_prefix('c').unwrap_or(header).split_whitespace() {
            match field.split_once('=') {
                Some(("n", v)) => n = v.parse::<usize>().ok(),
                Some(("m", v)) => m = v.parse::<usize>().ok(),
                Some(("mode", v)) => mode = Some(v.parse::<EncodingMode>()?),
                Some(("labels", v)) => labels = Some(Labels::new(v.split(','))?),
                _ => return Err(perr(1, format!("unexpected header field `{field}`"))),
            }
        }
        let (Some(n), Some(m), Some(mode)) = (n, m, mode) else {
            return Err(perr(1, "header must be `c n=<int> m=<int> mode=<mode>`".into()));
        };
        let labels = labels.unwrap_or_else(|| Labels::standard(m));
        let mut names: Vec<String> = Vec::new();
        for (expected, (lineno, line)) in (1usize..).zip(lines) {
            let words: Vec<&str> = line.split_whitespace().collect();
            let [var, key, label] = words.as_slice() else {
                return Err(perr(lineno + 1, "expected `<var> <key> <label>`".into()));
            };
            let var: usize = var
                .parse()
                .map_err(|_| perr(lineno + 1, format!("bad variable `{var}`")))?;
            let alt = labels.lookup(label)?;
            if var != expected || alt.id() != (var - 1) % m {
                return Err(perr(lineno + 1, format!("variable {var} out of sequence")));
            }
            if alt.id() == 0 {
                names.push(key.to_string());
            } else if names.last().map(String::as_str) != Some(*key) {
                return Err(perr(lineno + 1, format!("key `{key}` does not match its block")));
            }
        }
        let map = match mode {
            EncodingMode::Profile => {
                let map = VariableMap::profiles(n, m)?;
                if names.len() != map.num_keys() || names.iter().enumerate().any(|(i, k)| k != &i.to_string()) {
                    return Err(perr(0, "profile map must list every profile index in order".into()));
                }
                map
            }
            EncodingMode::C2 => {
                let keys = names
                    .iter()
                    .map(|k| MarginMatrix::from_key(k, n))
                    .collect::<Result<Vec<_>>>()?;
                if !keys.windows(2).all(|w| w[0] < w[1]) {
                    return Err(perr(0, "margin keys must be sorted".into()));
                }
                VariableMap::margins(n, m, keys)
            }
            EncodingMode::Proof => VariableMap::named(n, labels.clone(), names),
        };
        Ok(VariableMap { labels, ..map })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbering_and_sidecar() {
        let map = VariableMap::profiles(3, 3).unwrap();
        assert_eq!(map.num_vars(), 648);
        assert_eq!(map.var(0, Alternative(0)), 1);
        assert_eq!(map.var(215, Alternative(2)), 648);
        assert_eq!(map.decode_var(648), Some((215, Alternative(2))));
        assert_eq!(map.decode_var(649), None);
        let text = map.to_sidecar();
        assert!(text.starts_with("c n=3 m=3 mode=profile labels=a,b,c\n1 0 a\n2 0 b\n3 0 c\n4 1 a\n"));
        assert_eq!(VariableMap::parse_sidecar(&text).unwrap(), map);

        let named = VariableMap::named(15, Labels::standard(4), vec!["P0".into(), "P1".into()]);
        assert_eq!(VariableMap::parse_sidecar(&named.to_sidecar()).unwrap(), named);
        let broken = named.to_sidecar().replace("6 P1 b", "6 P0 b");
        assert!(VariableMap::parse_sidecar(&broken).is_err());
    }
}
