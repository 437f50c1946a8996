use std::path::PathBuf;

use hwm_core::prefs::{parse_order, parse_profile_text, Labels, Profile};
use hwm_core::rules::{
    dodgson_scores, kemeny_rankings, maximin_scores, rule_by_name, set_rule_by_name, RULE_NAMES, SET_RULE_NAMES,
};
use hwm_core::tally::{condorcet_winner, margin_matrix};
use serde_json::json;

use crate::{read, tiebreak, CmdResult, Global, Outcome};

fn scores(labels: &Labels, values: &[impl ToString]) -> String {
    labels
        .names()
        .iter()
        .zip(values)
        .map(|(l, v)| format!("{l}={}", v.to_string()))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn analyze(g: &Global, path: &PathBuf, tb: Option<&str>) -> CmdResult {
    let (labels, profile) = parse_profile_text(&read(path)?)?;
    let tb = tiebreak(tb, &labels)?;
    let mut r = g.report();
    r.field(
        "profile",
        format!(
            "n={} m={} labels={}",
            profile.n(),
            profile.m(),
            labels.names().join(",")
        ),
    );
    r.field("tiebreak", tb.priority().format(&labels));
    let mm = margin_matrix(&profile);
    r.block("margins", &mm.to_csv(&labels));
    r.field(
        "condorcet winner",
        condorcet_winner(&profile).map_or("none", |a| labels.name(a)),
    );
    for name in RULE_NAMES.iter().filter(|n| **n != "dictator") {
        let winner = labels.name(rule_by_name(name, tb)?.winner(&profile)?).to_string();
        let text = match *name {
            "kemeny" => {
                let rankings = kemeny_rankings(&profile)?;
                let shown: Vec<String> = rankings.iter().map(|o| o.compact(&labels)).collect();
                format!("{winner} (optimal rankings: {})", shown.join(" "))
            }
            "dodgson" => format!("{winner} (scores {})", scores(&labels, &dodgson_scores(&profile)?)),
            "maximin" => format!("{winner} (scores {})", scores(&labels, &maximin_scores(&mm))),
            _ => winner.clone(),
        };
        r.push(name, text, json!(winner));
    }
    for name in SET_RULE_NAMES {
        let set = set_rule_by_name(name, tb)?.winners(&profile)?;
        r.field(name, set.format(&labels));
    }
    Ok((r, Outcome::Pass))
}

pub fn pad(g: &Global, path: &PathBuf, order: &str, pairs: usize) -> CmdResult {
    let (labels, profile) = parse_profile_text(&read(path)?)?;
    let order = parse_order(order, &labels)?;
    let mut padded: Profile = profile.clone();
    for _ in 0..pairs {
        padded = padded.pad(order)?;
    }
    let mut r = g.report();
    r.field("voters", format!("{} -> {}", profile.n(), padded.n()));
    let (before, after) = (margin_matrix(&profile), margin_matrix(&padded));
    let same = before
        .alternatives()
        .all(|a| before.alternatives().all(|b| before.get(a, b) == after.get(a, b)));
    r.field("margins unchanged", if same { "yes" } else { "no" });
    r.field(
        "condorcet winner",
        condorcet_winner(&padded).map_or("none", |a| labels.name(a)),
    );
    r.block("profile", &padded.to_text(&labels));
    Ok((r, if same { Outcome::Pass } else { Outcome::Violation }))
}
