//! Pattern-growth frequent-sequence mining.
//!
//! Depth-first search over prefix-projected databases. A projected database
//! stores `(session, resume position)` pairs — the position just past the
//! prefix's first occurrence — so extension counting never rescans the part
//! of a session the prefix already consumed. One session contributes at most
//! one occurrence per extension item, which keeps support set-based and
//! identical to the level-wise miner's.

use std::collections::{HashMap, HashSet};

use crate::error::Result;
use crate::types::Session;

use super::{absolute_threshold, into_patterns, FrequentSet, MiningParams, MiningStats, ProjectedLog};

pub fn mine_patterngrowth(sessions: &[Session], params: &MiningParams) -> Result<FrequentSet> {
    params.validate()?;
    let log = ProjectedLog::build(sessions, params.level);
    let min_count = absolute_threshold(params, log.total());
    let (found, explored) = grow(&log, min_count, 1, params.max_pattern_length);
    let patterns = into_patterns(found, &log);
    let stats = MiningStats {
        candidate_count: explored,
        frequent_count: patterns.len(),
        rule_count: 0,
    };
    Ok(FrequentSet {
        level: params.level,
        total_sessions: log.total(),
        patterns,
        stats,
    })
}

/// Core search, shared with the multilevel pipeline (which mines with an
/// absolute floor and only wants patterns of length `record_min_len` or
/// more). Returns `(frequent patterns with counts, expansions explored)`.
pub(crate) fn grow(
    log: &ProjectedLog,
    min_count: usize,
    record_min_len: usize,
    max_len: Option<usize>,
) -> (Vec<(Vec<u32>, usize)>, usize) {
    // The root's projected database: every session from position 0.
    let root: Vec<(u32, u32)> = (0..log.sessions.len() as u32).map(|s| (s, 0)).collect();
    let mut found = Vec::new();
    let mut explored = 0usize;
    let mut prefix = Vec::new();
    expand(
        log,
        min_count,
        record_min_len,
        max_len,
        &root,
        &mut prefix,
        &mut found,
        &mut explored,
    );
    (found, explored)
}

#[allow(clippy::too_many_arguments)]
fn expand(
    log: &ProjectedLog,
    min_count: usize,
    record_min_len: usize,
    max_len: Option<usize>,
    projected: &[(u32, u32)],
    prefix: &mut Vec<u32>,
    found: &mut Vec<(Vec<u32>, usize)>,
    explored: &mut usize,
) {
    if max_len == Some(prefix.len()) {
        return;
    }
    // For each item, the sessions where it occurs after the resume position,
    // with the new resume position just past that first occurrence.
    let mut extensions: HashMap<u32, Vec<(u32, u32)>> = HashMap::new();
    for &(session, start) in projected {
        let items = &log.sessions[session as usize];
        let mut seen_here: HashSet<u32> = HashSet::new();
        for (offset, &item) in items[start as usize..].iter().enumerate() {
            if seen_here.insert(item) {
                extensions
                    .entry(item)
                    .or_default()
                    .push((session, start + offset as u32 + 1));
            }
        }
    }
    let mut items: Vec<u32> = extensions.keys().copied().collect();
    items.sort_unstable();
    *explored += items.len();
    for item in items {
        let next = &extensions[&item];
        if next.len() < min_count {
            continue;
        }
        prefix.push(item);
        if prefix.len() >= record_min_len {
            found.push((prefix.clone(), next.len()));
        }
        expand(log, min_count, record_min_len, max_len, next, prefix, found, explored);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::miners::mine_apriori;
    use crate::pattern::HierarchyLevel;
    use crate::test_support::{sessions_from_labels, sessions_from_services};

    fn params(min_support_pct: f64, level: HierarchyLevel) -> MiningParams {
        MiningParams {
            min_support_pct,
            min_confidence_pct: 0.0,
            level,
            max_pattern_length: None,
        }
    }

    #[test]
    fn tiny_log_matches_the_level_wise_miner() {
        let sessions = sessions_from_services(&[
            &["A", "B", "C"],
            &["A", "C"],
            &["B", "C"],
            &["A", "B"],
        ]);
        let p = params(50.0, HierarchyLevel::Service);
        let growth = mine_patterngrowth(&sessions, &p).unwrap();
        let levelwise = mine_apriori(&sessions, &p).unwrap();
        assert_eq!(growth.patterns, levelwise.patterns);
        assert_eq!(growth.support_of(&["A".into(), "B".into()]), Some(2));
    }

    #[test]
    fn operation_level_keeps_distinct_operations_apart() {
        let sessions = sessions_from_labels(&[
            &["A.x", "A.y", "B.x"],
            &["A.x", "B.x"],
            &["A.y", "B.x"],
        ]);
        let found =
            mine_patterngrowth(&sessions, &params(60.0, HierarchyLevel::Operation)).unwrap();
        assert_eq!(found.support_of(&["A.x".into(), "B.x".into()]), Some(2));
        assert_eq!(found.support_of(&["A.y".into(), "B.x".into()]), Some(2));
        assert_eq!(found.support_of(&["A.x".into(), "A.y".into()]), None);
    }

    #[test]
    fn projection_resumes_after_the_first_occurrence_only() {
        // Repeats survive only at operation level. In "B A B" the prefix
        // [B.op1] resumes at position 1, so both the second B and the A are
        // still reachable as extensions.
        let sessions = sessions_from_labels(&[&["B", "A", "B"], &["B", "B"]]);
        let found =
            mine_patterngrowth(&sessions, &params(50.0, HierarchyLevel::Operation)).unwrap();
        assert_eq!(
            found.support_of(&["B.op1".into(), "B.op1".into()]),
            Some(2)
        );
        assert_eq!(
            found.support_of(&["B.op1".into(), "A.op1".into(), "B.op1".into()]),
            Some(1)
        );
    }

    #[test]
    fn explored_counter_is_positive_and_deterministic() {
        let sessions = sessions_from_services(&[&["A", "B"], &["A", "B"]]);
        let a = mine_patterngrowth(&sessions, &params(50.0, HierarchyLevel::Service)).unwrap();
        let b = mine_patterngrowth(&sessions, &params(50.0, HierarchyLevel::Service)).unwrap();
        assert_eq!(a.stats.candidate_count, b.stats.candidate_count);
        assert!(a.stats.candidate_count >= a.stats.frequent_count);
    }
}
