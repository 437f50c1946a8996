//! CNF encodings of "Condorcet-consistent and half-way monotone" for
//! external SAT solvers, DIMACS I/O, and decoding of models into rule tables.
//!
//! Variable `x[k, a]` is true iff the rule picks `a` at key `k`, where a key
//! is a profile, a margin matrix, or a named proof-tree node.

mod encode;
mod varmap;
mod verify;

use std::io::Write;

use crate::error::{Error, Result};

pub use encode::{
    encode_full, encode_proof_neighborhood, realizable_margins, ClauseCounts, EncodeConfig, Encoding, NeighborhoodStyle,
};
pub use varmap::{EncodingMode, VariableMap};
pub use verify::{decode_model, decode_named, verify_rule, RuleVerification};

/// A formula in conjunctive normal form. Clauses are stored back to back,
/// each terminated by 0 as in DIMACS.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    literals: Vec<i32>,
    num_clauses: usize,
}

impl CnfFormula {
    pub fn new(num_vars: usize) -> CnfFormula {
        CnfFormula {
            num_vars,
            ..CnfFormula::default()
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.num_clauses
    }

    /// Panics on a 0 literal or a variable above `num_vars`; encoders only
    /// build clauses from a [`VariableMap`].
    pub fn add_clause(&mut self, clause: &[i32]) {
        for &lit in clause {
            assert!(
                lit != 0 && lit.unsigned_abs() as usize <= self.num_vars,
                "literal {lit} out of range"
            );
        }
        self.literals.extend_from_slice(clause);
        self.literals.push(0);
        self.num_clauses += 1;
    }

    /// Appends clauses already in 0-terminated form.
    pub(crate) fn extend_terminated(&mut self, block: &[i32]) {
        debug_assert!(block.is_empty() || block.last() == Some(&0));
        self.num_clauses += block.iter().filter(|&&l| l == 0).count();
        self.literals.extend_from_slice(block);
    }

    pub fn clauses(&self) -> impl Iterator<Item = &[i32]> {
        self.literals.split(|&l| l == 0).take(self.num_clauses)
    }

    /// Copy without the clauses for which `drop` returns true.
    pub fn without(&self, drop: impl Fn(&[i32]) -> bool) -> CnfFormula {
        let mut out = CnfFormula::new(self.num_vars);
        for c in self.clauses().filter(|c| !drop(c)) {
            out.add_clause(c);
        }
        out
    }

    /// Whether `assignment` (indexed by variable - 1) satisfies every clause.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses()
            .all(|c| c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)))
    }
}

pub fn write_dimacs(formula: &CnfFormula, sink: &mut impl Write) -> Result<()> {
    let mut out = std::io::BufWriter::new(sink);
    writeln!(out, "p cnf {} {}", formula.num_vars, formula.num_clauses)?;
    let mut line = String::new();
    for clause in formula.clauses() {
        line.clear();
        for lit in clause {
            line.push_str(&lit.to_string());
            line.push(' ');
        }
        line.push('0');
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn dimacs_string(formula: &CnfFormula) -> String {
    let mut buf = Vec::new();
    write_dimacs(formula, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

/// Truth values by variable; `None` when the model did not mention it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment(pub Vec<Option<bool>>);

impl Assignment {
    pub fn from_bools(values: &[bool]) -> Assignment {
        Assignment(values.iter().map(|&b| Some(b)).collect())
    }

    pub fn value(&self, var: usize) -> Option<bool> {
        self.0.get(var.checked_sub(1)?).copied().flatten()
    }

    /// Total assignment, or the first unassigned variable.
    pub fn to_bools(&self) -> std::result::Result<Vec<bool>, usize> {
        self.0.iter().enumerate().map(|(i, v)| v.ok_or(i + 1)).collect()
    }

    /// Solver-style model text, e.g. `v 1 -2 0`.
    pub fn to_model_text(&self) -> String {
        let lits: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|b| if b { format!("{}", i + 1) } else { format!("-{}", i + 1) }))
            .collect();
        format!("s SATISFIABLE\nv {} 0\n", lits.join(" "))
    }
}

/// Reads a solver model: `v` lines or bare literal lists, `c` and `s` lines
/// skipped. A solver that reported unsatisfiability has no model.
pub fn read_dimacs_model(source: &str, num_vars: usize) -> Result<Assignment> {
    let mut values = vec![None; num_vars];
    for raw in source.lines() {
        let line = raw.trim();
        let status = line.strip_prefix("s ").map(str::trim).unwrap_or(line);
        if matches!(status, "UNSATISFIABLE" | "UNSAT") {
            return Err(Error::MalformedModel(
                "solver reported UNSATISFIABLE: there is no model to decode".into(),
            ));
        }
        if line.is_empty() || line.starts_with('c') || line.starts_with('s') || matches!(line, "SAT" | "SATISFIABLE") {
            continue;
        }
        let body = line.strip_prefix('v').unwrap_or(line);
        for token in body.split_whitespace() {
            let lit: i64 = token
                .parse()
                .map_err(|_| Error::MalformedModel(format!("unexpected token `{token}` in `{line}`")))?;
            if lit == 0 {
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if var > num_vars {
                return Err(Error::VariableOutOfRange(lit, num_vars));
            }
            values[var - 1] = Some(lit > 0);
        }
    }
    Ok(Assignment(values))
}
