//! Closed frequent-sequence mining.
//!
//! A frequent pattern is closed when no strictly longer frequent pattern has
//! the same support and contains it as a subsequence. Mining runs the
//! pattern-growth search, then discards the non-closed patterns; the
//! surviving set loses no information, since every dropped pattern can be
//! read off a kept supersequence with identical support.

use std::collections::HashMap;

use crate::error::Result;
use crate::pattern::is_subsequence;
use crate::types::Session;

use super::{mine_patterngrowth, FrequentSet, MiningParams};

pub fn mine_closed(sessions: &[Session], params: &MiningParams) -> Result<FrequentSet> {
    let mut base = mine_patterngrowth(sessions, params)?;

    // Group by support: only an equal-support supersequence can absorb a
    // pattern. Within a group, compare each pattern against the longer ones.
    let mut by_support: HashMap<usize, Vec<&[String]>> = HashMap::new();
    for pattern in &base.patterns {
        by_support
            .entry(pattern.support_count)
            .or_default()
            .push(&pattern.items);
    }
    let closed: Vec<bool> = base
        .patterns
        .iter()
        .map(|pattern| {
            !by_support[&pattern.support_count]
                .iter()
                .any(|other| other.len() > pattern.items.len() && is_subsequence(&pattern.items, other))
        })
        .collect();

    let mut keep = closed.into_iter();
    base.patterns.retain(|_| keep.next().unwrap());
    base.stats.frequent_count = base.patterns.len();
    Ok(base)
}
