use std::path::PathBuf;

use clap::{Args, ValueEnum};
use hwm_core::monotonicity::*;
use hwm_core::prefs::Labels;
use hwm_core::rules::{rule_by_name, set_rule_by_name, RuleTable, SetRule, Singleton, VotingRule};
use hwm_core::scan::{Coverage, ScanOutcome};
use hwm_core::Error;
use serde_json::Value;

use crate::report::Report;
use crate::{read, tiebreak, CmdResult, Failure, Global, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Hwm,
    StrongReversal,
    Participation,
    Manipulability,
    HwmOptimistic,
    HwmPessimistic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Domain {
    Full,
    Condorcet,
}

#[derive(Args)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    property: Property,
    /// Rule by name (see `analyze` output for the list).
    #[arg(long, conflicts_with = "table")]
    rule: Option<String>,
    /// Rule table file; repeat with different electorate sizes for participation.
    #[arg(long)]
    table: Vec<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    tiebreak: Option<String>,
    /// Profiles considered for manipulability.
    #[arg(long, value_enum, default_value = "full")]
    domain: Domain,
}

fn witness_value(json: String) -> Value {
    serde_json::from_str(&json).expect("witnesses serialize to JSON")
}

/// Result lines shared by every property; `Undecided` when over budget.
fn conclude<W>(
    r: &mut Report,
    outcome: hwm_core::Result<ScanOutcome<W>>,
    describe: impl FnOnce(&mut Report, &W),
) -> Result<Outcome, Failure> {
    match outcome {
        Ok(ScanOutcome { witness, coverage }) => {
            r.field("coverage", coverage.describe());
            Ok(match witness {
                Some(w) => {
                    r.field("result", "violation");
                    describe(r, &w);
                    Outcome::Violation
                }
                None => {
                    let kind = match coverage {
                        Coverage::Exhaustive { .. } => "exhaustive",
                        Coverage::Sampled { .. } => "sampled",
                    };
                    r.field("result", format!("no violation ({kind})"));
                    Outcome::Pass
                }
            })
        }
        Err(Error::BudgetExceeded { budget, detail }) => {
            r.field("result", format!("budget exceeded: {detail}"));
            r.field(
                "hint",
                format!("raise --budget above {budget} or pass --seed to sample"),
            );
            Ok(Outcome::Undecided)
        }
        Err(e) => Err(e.into()),
    }
}

fn reversal_lines(r: &mut Report, w: &ReversalWitness, labels: &Labels, check: &str) {
    r.push(
        "witness",
        format!(
            "voter {} ({}) in [{}]: {} before, {} after reversing{}",
            w.voter,
            w.truthful_order().format(labels),
            w.profile.to_inline(labels),
            labels.name(w.winner_before),
            labels.name(w.winner_after),
            if w.is_strong() { " (strong)" } else { "" }
        ),
        witness_value(w.to_json(check, labels)),
    );
}

pub fn check(g: &Global, a: &CheckArgs) -> CmdResult {
    let cfg = g.scan();
    let tables = a
        .table
        .iter()
        .map(|p| RuleTable::parse(&read(p)?).map_err(Failure::from))
        .collect::<Result<Vec<_>, _>>()?;
    let (n, m) = match (tables.first(), a.n, a.m) {
        (Some(t), n, m) => (
            n.unwrap_or_else(|| tables.iter().map(RuleTable::n).max().unwrap_or(t.n())),
            m.unwrap_or(t.m()),
        ),
        (None, Some(n), Some(m)) => (n, m),
        _ => return Err(Failure::Usage("give --n and --m, or --table".into())),
    };
    if tables.iter().any(|t| t.m() != m) {
        return Err(Failure::Usage("all tables must share m".into()));
    }
    let labels = Labels::standard(m);
    let tb = tiebreak(a.tiebreak.as_deref(), &labels)?;
    let table_for = |n: usize| -> Result<&RuleTable, Failure> {
        tables
            .iter()
            .find(|t| t.n() == n)
            .ok_or_else(|| Failure::Usage(format!("no table for n={n}")))
    };

    let mut r = g.report();
    let rule_name = match (&a.rule, tables.is_empty()) {
        (Some(name), _) => name.clone(),
        (None, false) => a
            .table
            .iter()
            .map(|p| p.display().to_string())
            .collect::<Vec<_>>()
            .join(","),
        (None, true) => return Err(Failure::Usage("give --rule or --table".into())),
    };
    let property = a
        .property
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    r.field("property", &property);
    r.field("rule", &rule_name);
    r.number("n", n);
    r.number("m", m);

    let set_valued = matches!(a.property, Property::HwmOptimistic | Property::HwmPessimistic);
    let named: Option<Box<dyn VotingRule>> = match &a.rule {
        Some(name) if !set_valued => Some(rule_by_name(name, tb)?),
        _ => None,
    };
    let resolute = |n: usize| -> Result<&dyn VotingRule, Failure> {
        match &named {
            Some(rule) => Ok(rule.as_ref()),
            None => Ok(table_for(n)? as &dyn VotingRule),
        }
    };

    let outcome = match a.property {
        Property::Hwm | Property::StrongReversal => {
            let rule = resolute(n)?;
            let scan = if a.property == Property::Hwm {
                check_halfway_monotonicity(rule, n, m, &cfg)
            } else {
                check_strong_reversal(rule, n, m, &cfg)
            };
            let family = named.as_ref().map(|r| RuleFamily::uniform(r.as_ref()));
            conclude(&mut r, scan, |r, w| {
                reversal_lines(r, w, &labels, &property);
                if let Some(family) = &family {
                    if let Ok(p) = explain_hwm_via_participation(w, family) {
                        r.push(
                            "participation",
                            format!(
                                "a voter with {} joining [{}] at position {} changes {} to {}",
                                p.joiner_order.format(&labels),
                                p.profile_without.to_inline(&labels),
                                p.join_position,
                                labels.name(p.winner_without),
                                labels.name(p.winner_with)
                            ),
                            witness_value(p.to_json("participation", &labels)),
                        );
                    }
                }
            })?
        }
        Property::Participation => {
            let family = match &named {
                Some(rule) => RuleFamily::uniform(rule.as_ref()),
                None => {
                    let mut f = RuleFamily::new();
                    for t in &tables {
                        f = f.with(t.n(), t);
                    }
                    f
                }
            };
            conclude(&mut r, check_participation(&family, n, m, &cfg), |r, w| {
                r.push(
                    "witness",
                    format!(
                        "a voter with {} joining [{}] changes {} to {}",
                        w.joiner_order.format(&labels),
                        w.profile_without.to_inline(&labels),
                        labels.name(w.winner_without),
                        labels.name(w.winner_with)
                    ),
                    witness_value(w.to_json(&property, &labels)),
                );
            })?
        }
        Property::Manipulability => {
            let domain = match a.domain {
                Domain::Full => ManipulationDomain::Full,
                Domain::Condorcet => ManipulationDomain::Condorcet,
            };
            r.field("domain", format!("{:?}", a.domain).to_lowercase());
            conclude(
                &mut r,
                check_manipulability(resolute(n)?, n, m, domain, &cfg),
                |r, w| {
                    r.push(
                        "witness",
                        format!(
                            "voter {} ({}) in [{}] reports {}: {} instead of {}",
                            w.voter,
                            w.profile.voters()[w.voter].format(&labels),
                            w.profile.to_inline(&labels),
                            w.misreport.format(&labels),
                            labels.name(w.winner_misreport),
                            labels.name(w.winner_truthful)
                        ),
                        witness_value(w.to_json(&property, &labels)),
                    );
                },
            )?
        }
        Property::HwmOptimistic | Property::HwmPessimistic => {
            let boxed: Box<dyn SetRule + '_> = match &a.rule {
                Some(name) => set_rule_by_name(name, tb)?,
                None => Box::new(Singleton(table_for(n)?)),
            };
            let scan = if a.property == Property::HwmOptimistic {
                check_hwm_optimistic(boxed.as_ref(), n, m, &cfg)
            } else {
                check_hwm_pessimistic(boxed.as_ref(), n, m, &cfg)
            };
            conclude(&mut r, scan, |r, w| {
                r.push(
                    "witness",
                    format!(
                        "voter {} ({}) in [{}]: {} before, {} after reversing",
                        w.voter,
                        w.profile.voters()[w.voter].format(&labels),
                        w.profile.to_inline(&labels),
                        w.set_before.format(&labels),
                        w.set_after.format(&labels)
                    ),
                    witness_value(w.to_json(&property, &labels)),
                );
            })?
        }
    };
    Ok((r, outcome))
}
