use std::path::{Path, PathBuf};
use std::process::Command;

use clap::{Args, ValueEnum};
use hwm_core::prefs::Labels;
use hwm_core::proofcheck::{build_even_tree, build_odd_tree};
use hwm_core::rules::RuleTable;
use hwm_core::satgen::*;
use hwm_core::Error;
use serde_json::json;

use crate::report::Report;
use crate::{read, CmdResult, Failure, Global, Outcome, SOLVER_ENV};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Profile,
    C2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Tree {
    Odd,
    Even,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Style {
    Collapsed,
    Expanded,
}

#[derive(Args)]
pub struct EncodeArgs {
    #[arg(long)]
    m: usize,
    #[arg(long, required_unless_present = "proof")]
    n: Option<usize>,
    #[arg(long, value_enum, default_value = "profile")]
    mode: Mode,
    /// Encode only the profiles of a proof tree instead of the full domain.
    #[arg(long, value_enum, conflicts_with_all = ["n", "mode"])]
    proof: Option<Tree>,
    #[arg(long, value_enum, default_value = "collapsed", requires = "proof")]
    style: Style,
    /// DIMACS output; the variable map goes to `<out>.map`.
    #[arg(long)]
    out: PathBuf,
    /// Run this solver on the output (default: $HWM_SOLVER) and decode its answer.
    #[arg(long, num_args = 0..=1, default_missing_value = "")]
    solve: Option<String>,
}

#[derive(Args)]
pub struct DecodeArgs {
    /// Solver output with `v` lines or a bare literal list.
    #[arg(long)]
    model: PathBuf,
    /// Variable map written by `encode`.
    #[arg(long)]
    map: PathBuf,
    /// Write the decoded rule table here instead of printing it.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn unsat(output: &str) -> bool {
    output.lines().any(|l| {
        let l = l.trim();
        matches!(
            l.strip_prefix("s ").map(str::trim).unwrap_or(l),
            "UNSATISFIABLE" | "UNSAT"
        )
    })
}

fn named_choices(map: &VariableMap, model: &Assignment) -> Result<(String, serde_json::Value), Failure> {
    let named = decode_named(model, map)?;
    let l: &Labels = map.labels();
    let text: Vec<String> = named.iter().map(|(k, a)| format!("{k}={}", l.name(*a))).collect();
    let value: serde_json::Map<String, serde_json::Value> =
        named.iter().map(|(k, a)| (k.clone(), json!(l.name(*a)))).collect();
    Ok((text.join(" "), value.into()))
}

fn table_lines(r: &mut Report, g: &Global, table: &RuleTable) -> Result<Outcome, Failure> {
    match verify_rule(table, &g.scan()) {
        Ok(v) => {
            let labels = Labels::standard(table.m());
            r.field("coverage", v.coverage.describe());
            match &v.condorcet_violation {
                None => r.field("condorcet", "consistent"),
                Some((p, x, chosen)) => r.field(
                    "condorcet",
                    format!(
                        "violated at [{}]: winner {}, table picks {}",
                        p.to_inline(&labels),
                        labels.name(*x),
                        labels.name(*chosen)
                    ),
                ),
            }
            match &v.hwm_violation {
                None => r.field("hwm", "no violation"),
                Some(w) => r.push(
                    "hwm",
                    format!(
                        "voter {} ({}) in [{}]: {} before, {} after reversing",
                        w.voter,
                        w.truthful_order().format(&labels),
                        w.profile.to_inline(&labels),
                        labels.name(w.winner_before),
                        labels.name(w.winner_after)
                    ),
                    serde_json::from_str(&w.to_json("hwm", &labels)).expect("valid json"),
                ),
            }
            let clean = v.is_clean();
            r.field("verdict", if clean { "clean" } else { "violation" });
            Ok(if clean { Outcome::Pass } else { Outcome::Violation })
        }
        Err(Error::BudgetExceeded { detail, .. }) => {
            r.field("verdict", format!("budget exceeded: {detail}"));
            Ok(Outcome::Undecided)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn encode(g: &Global, a: &EncodeArgs) -> CmdResult {
    let e = match a.proof {
        Some(which) => {
            let tree = match which {
                Tree::Odd => build_odd_tree(a.m)?,
                Tree::Even => build_even_tree(a.m)?,
            };
            let style = match a.style {
                Style::Collapsed => NeighborhoodStyle::Collapsed,
                Style::Expanded => NeighborhoodStyle::Expanded,
            };
            encode_proof_neighborhood(&tree, style)?
        }
        None => {
            let mode = match a.mode {
                Mode::Profile => EncodingMode::Profile,
                Mode::C2 => EncodingMode::C2,
            };
            let cfg = EncodeConfig {
                budget: g.budget,
                execution: g.execution(),
            };
            encode_full(a.n.expect("clap requires n"), a.m, mode, &cfg)?
        }
    };
    let mut file = std::io::BufWriter::new(std::fs::File::create(&a.out)?);
    write_dimacs(&e.formula, &mut file)?;
    drop(file);
    let map_path = with_suffix(&a.out, ".map");
    std::fs::write(&map_path, e.map.to_sidecar())?;

    let mut r = g.report();
    r.field("mode", e.map.mode());
    r.number("n", e.map.n());
    r.number("m", e.map.m());
    r.number("keys", e.map.num_keys());
    r.number("variables", e.formula.num_vars());
    r.number("clauses", e.formula.num_clauses());
    r.push(
        "families",
        format!(
            "functionality {} condorcet {} hwm {}",
            e.counts.functionality, e.counts.condorcet, e.counts.hwm
        ),
        json!({"functionality": e.counts.functionality, "condorcet": e.counts.condorcet, "hwm": e.counts.hwm}),
    );
    r.field("cnf", a.out.display());
    r.field("map", map_path.display());

    let Some(solver) = &a.solve else {
        return Ok((r, Outcome::Pass));
    };
    let solver = match solver.as_str() {
        "" => std::env::var(SOLVER_ENV)
            .map_err(|_| Failure::Usage(format!("--solve needs a solver path or ${SOLVER_ENV}")))?,
        s => s.to_string(),
    };
    let run = Command::new(&solver)
        .arg(&a.out)
        .output()
        .map_err(|err| Failure::Usage(format!("could not run solver `{solver}`: {err}")))?;
    let stdout = String::from_utf8_lossy(&run.stdout);
    r.field("solver", &solver);
    let proof = e.map.mode() == EncodingMode::Proof;
    if unsat(&stdout) {
        r.field("status", "UNSATISFIABLE");
        if proof {
            r.field("verdict", "the tree's profiles admit no such rule");
        }
        return Ok((r, Outcome::Pass));
    }
    let model = read_dimacs_model(&stdout, e.formula.num_vars())?;
    let bools = model
        .to_bools()
        .map_err(|var| Failure::Usage(format!("solver model leaves variable {var} unassigned")))?;
    if !e.formula.is_satisfied_by(&bools) {
        r.field("status", "model does not satisfy the formula");
        return Ok((r, Outcome::Violation));
    }
    r.field("status", "SATISFIABLE");
    if proof {
        let (text, value) = named_choices(&e.map, &model)?;
        r.push("choices", text, value);
        r.field(
            "verdict",
            "satisfiable: these profiles alone do not force a contradiction",
        );
        return Ok((r, Outcome::Violation));
    }
    let table = decode_model(&model, &e.map)?;
    let table_path = with_suffix(&a.out, ".table");
    std::fs::write(&table_path, table.to_text())?;
    r.field("table", table_path.display());
    let outcome = table_lines(&mut r, g, &table)?;
    Ok((r, outcome))
}

pub fn decode(g: &Global, a: &DecodeArgs) -> CmdResult {
    let map = VariableMap::parse_sidecar(&read(&a.map)?)?;
    let model = read_dimacs_model(&read(&a.model)?, map.num_vars())?;
    let mut r = g.report();
    r.field("mode", map.mode());
    if map.mode() == EncodingMode::Proof {
        let (text, value) = named_choices(&map, &model)?;
        r.push("choices", text, value);
        return Ok((r, Outcome::Pass));
    }
    let table = decode_model(&model, &map)?;
    r.number("entries", table.len());
    match &a.out {
        Some(path) => {
            std::fs::write(path, table.to_text())?;
            r.field("table", path.display());
        }
        None => r.block("table", &table.to_text()),
    }
    Ok((r, Outcome::Pass))
}

pub fn verify_table(g: &Global, path: &PathBuf) -> CmdResult {
    let table = RuleTable::parse(&read(path)?)?;
    let mut r = g.report();
    r.field(
        "table",
        format!("n={} m={} mode={}", table.n(), table.m(), table.mode()),
    );
    let outcome = table_lines(&mut r, g, &table)?;
    Ok((r, outcome))
}
