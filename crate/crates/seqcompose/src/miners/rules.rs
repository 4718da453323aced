//! Sequential association rules over a frequent set.
//!
//! Every frequent pattern of length two or more is split at each interior
//! point into `antecedent ⇒ consequent`; the rule's confidence is the
//! pattern's support divided by the antecedent's. Ranking orders rules by
//! confidence, then support, then the canonical order of the full sequence,
//! so equal-strength rules always tie-break the same way.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::miners::FrequentSet;
use crate::pattern::support;
use crate::types::Session;

/// One mined rule. Items are labels at the frequent set's hierarchy level.
/// `support_pct` is the full sequence's support; `confidence_pct` is
/// `100 × support(antecedent ⧺ consequent) / support(antecedent)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationRule {
    pub antecedent: Vec<String>,
    pub consequent: Vec<String>,
    pub support_pct: f64,
    pub confidence_pct: f64,
}

impl AssociationRule {
    /// The antecedent and consequent re-joined into the mined sequence.
    pub fn full_sequence(&self) -> Vec<String> {
        let mut items = self.antecedent.clone();
        items.extend(self.consequent.iter().cloned());
        items
    }
}

impl std::fmt::Display for AssociationRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} => {} (support {:.2}%, confidence {:.2}%)",
            self.antecedent.join(","),
            self.consequent.join(","),
            self.support_pct,
            self.confidence_pct
        )
    }
}

/// Splits every frequent pattern into rules and keeps those whose confidence
/// reaches `min_confidence_pct`. Antecedent supports are read from the
/// frequent set when present and recounted from the sessions otherwise
/// (a prefix can fall below the support threshold's rounding only when the
/// set was post-filtered, e.g. closed mining).
pub fn generate_rules(
    frequent: &FrequentSet,
    sessions: &[Session],
    min_confidence_pct: f64,
) -> Result<Vec<AssociationRule>> {
    if !min_confidence_pct.is_finite() || min_confidence_pct < 0.0 {
        return Err(Error::Mining(format!(
            "min_confidence_pct must be a non-negative percentage, got {min_confidence_pct}"
        )));
    }
    let known: HashMap<&[String], usize> = frequent
        .patterns
        .iter()
        .map(|p| (p.items.as_slice(), p.support_count))
        .collect();
    let mut recounted: HashMap<&[String], usize> = HashMap::new();

    let mut rules = Vec::new();
    for pattern in &frequent.patterns {
        if pattern.items.len() < 2 {
            continue;
        }
        for split in 1..pattern.items.len() {
            let antecedent = &pattern.items[..split];
            let antecedent_count = match known.get(antecedent) {
                Some(&count) => count,
                None => *recounted
                    .entry(antecedent)
                    .or_insert_with(|| support(antecedent, sessions, frequent.level)),
            };
            if antecedent_count == 0 {
                // Unreachable for patterns mined from these sessions; guard
                // against a frequent set paired with the wrong log.
                return Err(Error::Mining(format!(
                    "antecedent {:?} never occurs in the supplied sessions",
                    antecedent.join(",")
                )));
            }
            let confidence_pct = 100.0 * pattern.support_count as f64 / antecedent_count as f64;
            if confidence_pct >= min_confidence_pct {
                rules.push(AssociationRule {
                    antecedent: antecedent.to_vec(),
                    consequent: pattern.items[split..].to_vec(),
                    support_pct: pattern.support_pct,
                    confidence_pct,
                });
            }
        }
    }
    Ok(rules)
}

/// Sorts rules in place: confidence descending, support descending, then the
/// canonical order of the full sequence, then shorter antecedent first.
pub fn rank_rules(rules: &mut [AssociationRule]) {
    rules.sort_by(compare_rank);
}

/// Ranks and keeps the `n` strongest rules.
pub fn top_n(rules: &[AssociationRule], n: usize) -> Vec<AssociationRule> {
    let mut ranked = rules.to_vec();
    rank_rules(&mut ranked);
    ranked.truncate(n);
    ranked
}

fn compare_rank(a: &AssociationRule, b: &AssociationRule) -> Ordering {
    b.confidence_pct
        .total_cmp(&a.confidence_pct)
        .then_with(|| b.support_pct.total_cmp(&a.support_pct))
        .then_with(|| {
            let len_a = a.antecedent.len() + a.consequent.len();
            let len_b = b.antecedent.len() + b.consequent.len();
            len_a.cmp(&len_b)
        })
        .then_with(|| {
            a.antecedent
                .iter()
                .chain(&a.consequent)
                .cmp(b.antecedent.iter().chain(&b.consequent))
        })
        .then_with(|| a.antecedent.len().cmp(&b.antecedent.len()))
}

/// One rule per line as a JSON object, ending with a newline.
pub fn rules_to_jsonl(rules: &[AssociationRule]) -> String {
    let mut out = String::new();
    for rule in rules {
        // Serialization of this struct cannot fail.
        out.push_str(&serde_json::to_string(rule).expect("rule serializes"));
        out.push('\n');
    }
    out
}

/// Parses JSONL rules, reporting the offending line on failure.
pub fn rules_from_jsonl(text: &str) -> Result<Vec<AssociationRule>> {
    let mut rules = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rule: AssociationRule = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: i + 1,
            message: format!("bad rule object: {e}"),
        })?;
        rules.push(rule);
    }
    Ok(rules)
}

pub fn write_rules(path: &Path, rules: &[AssociationRule]) -> Result<()> {
    std::fs::write(path, rules_to_jsonl(rules)).map_err(|e| Error::io(path, e))
}

pub fn read_rules(path: &Path) -> Result<Vec<AssociationRule>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    rules_from_jsonl(&text)
}
