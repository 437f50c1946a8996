use std::path::PathBuf;

use clap::{Args, ValueEnum};
use hwm_core::proofcheck::*;

use crate::report::Report;
use crate::{read, CmdResult, Failure, Global, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Odd,
    Even,
    Perez,
    IrresoluteOpt,
    IrresolutePess,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    which: Which,
    /// Number of alternatives; extra ones are added at the bottom.
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// Check this tree file instead of a built-in tree.
    #[arg(long)]
    tree: Option<PathBuf>,
    /// Add this many opposed voter pairs to every profile first.
    #[arg(long, default_value_t = 0)]
    pad: usize,
    /// Also write the checked tree in the tree file format.
    #[arg(long)]
    emit: Option<PathBuf>,
}

fn trees(a: &VerifyArgs) -> Result<Vec<(String, ProofTree)>, Failure> {
    let mut out = match (&a.tree, a.which) {
        (Some(path), _) => vec![(path.display().to_string(), parse_proof_tree(&read(path)?)?)],
        (None, Which::Odd) => vec![("odd".to_string(), build_odd_tree(a.m)?)],
        (None, Which::Even) => vec![("even".to_string(), build_even_tree(a.m)?)],
        (None, _) => vec![
            ("odd".to_string(), build_odd_tree(a.m)?),
            ("even".to_string(), build_even_tree(a.m)?),
        ],
    };
    if a.pad > 0 {
        for (_, t) in &mut out {
            *t = t.padded(a.pad)?;
        }
    }
    Ok(out)
}

fn verdict(r: &mut Report, result: hwm_core::Result<String>) -> bool {
    match result {
        Ok(text) => {
            r.block("transcript", &text);
            r.field("verdict", "pass");
            true
        }
        Err(e) => {
            r.field("verdict", format!("FAIL: {e}"));
            false
        }
    }
}

pub fn verify(g: &Global, a: &VerifyArgs) -> CmdResult {
    let mut r = g.report();
    let mut ok = true;
    if a.which == Which::Perez {
        if a.tree.is_some() || a.pad > 0 {
            return Err(Failure::Usage("perez takes no --tree or --pad".into()));
        }
        r.field("proof", "perez");
        ok &= verdict(&mut r, verify_perez().map(|rep| rep.to_string()));
        return Ok((r, if ok { Outcome::Pass } else { Outcome::Violation }));
    }
    let all = trees(a)?;
    if let (Some(path), [(_, tree)]) = (&a.emit, all.as_slice()) {
        std::fs::write(path, write_proof_tree(tree))?;
    }
    for (name, tree) in &all {
        r.field("proof", format!("{name} n={} m={}", tree.n(), tree.m()));
        let result = match a.which {
            Which::Odd | Which::Even => verify_tree(tree).map(|rep| rep.to_string()),
            Which::IrresoluteOpt => verify_tree_irresolute(tree, IrresoluteMode::Optimistic).map(|rep| rep.to_string()),
            Which::IrresolutePess => {
                verify_tree_irresolute(tree, IrresoluteMode::Pessimistic).map(|rep| rep.to_string())
            }
            Which::Perez => unreachable!("handled above"),
        };
        ok &= verdict(&mut r, result);
    }
    Ok((r, if ok { Outcome::Pass } else { Outcome::Violation }))
}
