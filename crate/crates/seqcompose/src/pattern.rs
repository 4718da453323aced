//! Sequential patterns over a two-level service/operation hierarchy.
//!
//! A pattern is an ordered list of items; a session supports it when the
//! pattern occurs as a (possibly gapped) subsequence of the session's
//! projection at the pattern's level. Support counts sessions, never
//! occurrences, so one session contributes at most 1 to any pattern.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::types::Session;

/// The two granularities a session can be viewed at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HierarchyLevel {
    /// Items are service names; repeat invocations of a service collapse.
    Service,
    /// Items are dotted `service.operation` labels; repeats are kept.
    Operation,
}

impl std::fmt::Display for HierarchyLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HierarchyLevel::Service => "service",
            HierarchyLevel::Operation => "operation",
        })
    }
}

/// A mined sequential pattern together with its observed support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pattern {
    pub level: HierarchyLevel,
    pub items: Vec<String>,
    pub support_count: usize,
    pub support_pct: f64,
}

/// Projects a session to the service level: the sequence of distinct service
/// names in order of first invocation. `[A(a), A(b), C(d), D(a), A(c)]`
/// becomes `[A, C, D]`.
pub fn project_service_level(session: &Session) -> Vec<String> {
    let mut seen: Vec<&str> = Vec::new();
    for inv in &session.invocations {
        let name = inv.service.as_str();
        if !seen.contains(&name) {
            seen.push(name);
        }
    }
    seen.into_iter().map(str::to_string).collect()
}

/// Projects a session to the given level.
pub fn project(session: &Session, level: HierarchyLevel) -> Vec<String> {
    match level {
        HierarchyLevel::Service => project_service_level(session),
        HierarchyLevel::Operation => session.invocations.iter().map(|i| i.label()).collect(),
    }
}

/// Order-preserving, possibly non-contiguous containment. The empty needle
/// is a subsequence of everything.
pub fn is_subsequence<T: PartialEq>(needle: &[T], haystack: &[T]) -> bool {
    let mut want = needle.iter();
    let mut next = want.next();
    for item in haystack {
        match next {
            Some(n) if n == item => next = want.next(),
            Some(_) => {}
            None => break,
        }
    }
    next.is_none()
}

/// Counts the sessions whose projection at `level` contains `items` as a
/// subsequence.
pub fn support(items: &[String], sessions: &[Session], level: HierarchyLevel) -> usize {
    sessions
        .iter()
        .filter(|s| is_subsequence(items, &project(s, level)))
        .count()
}

/// Support count expressed as a percentage of the session total.
pub fn support_pct(count: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * count as f64 / total as f64
    }
}

/// Smallest absolute count whose percentage clears `min_support_pct`, and at
/// least 1. May exceed `total`, in which case nothing can be frequent.
pub(crate) fn min_count_for_pct(min_support_pct: f64, total: usize) -> usize {
    let mut c = ((min_support_pct / 100.0) * total as f64).ceil() as usize;
    c = c.max(1);
    // Float rounding in the estimate above can land one off in either
    // direction; nudge until c is exactly the smallest qualifying count.
    while c > 1 && support_pct(c - 1, total) >= min_support_pct {
        c -= 1;
    }
    while c <= total && support_pct(c, total) < min_support_pct {
        c += 1;
    }
    c
}

/// Canonical pattern order: length ascending, then item-wise lexicographic.
pub fn canonical_cmp(a: &[String], b: &[String]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{Invocation, ServiceId};

    fn session(id: &str, calls: &[(&str, &str)]) -> Session {
        Session {
            id: id.to_string(),
            invocations: calls
                .iter()
                .map(|(s, o)| Invocation::new(ServiceId::new(*s).unwrap(), *o).unwrap())
                .collect(),
        }
    }

    #[test]
    fn service_projection_keeps_first_occurrence_order() {
        let s = session(
            "s1",
            &[("A", "a"), ("A", "b"), ("C", "d"), ("D", "a"), ("A", "c")],
        );
        assert_eq!(project_service_level(&s), ["A", "C", "D"]);
    }

    #[test]
    fn operation_projection_keeps_repeats() {
        let s = session("s1", &[("A", "a"), ("A", "a"), ("B", "x")]);
        assert_eq!(
            project(&s, HierarchyLevel::Operation),
            ["A.a", "A.a", "B.x"]
        );
    }

    #[test]
    fn subsequence_allows_gaps_and_empty_needle() {
        let hay = ["a", "b", "c", "d"].map(String::from);
        let ac = ["a", "c"].map(String::from);
        let ca = ["c", "a"].map(String::from);
        assert!(is_subsequence(&ac, &hay));
        assert!(!is_subsequence(&ca, &hay));
        assert!(is_subsequence::<String>(&[], &hay));
        assert!(is_subsequence::<String>(&[], &[]));
        assert!(!is_subsequence(&ac, &[]));
    }

    #[test]
    fn subsequence_consumes_haystack_items_once() {
        let hay = ["a", "b"].map(String::from);
        let aa = ["a", "a"].map(String::from);
        assert!(!is_subsequence(&aa, &hay));
        let hay2 = ["a", "b", "a"].map(String::from);
        assert!(is_subsequence(&aa, &hay2));
    }

    #[test]
    fn support_counts_sessions_not_occurrences() {
        let sessions = vec![
            session("s1", &[("A", "a"), ("B", "a"), ("A", "b"), ("B", "b")]),
            session("s2", &[("B", "a"), ("A", "a")]),
        ];
        let ab = ["A", "B"].map(String::from);
        // s1 contains A..B twice over, s2 not at all at service level.
        assert_eq!(support(&ab, &sessions, HierarchyLevel::Service), 1);
    }

    #[test]
    fn min_count_handles_inexact_percentages() {
        // 3.7% of 1000 needs 37 sessions, not 38: 100*37/1000 = 3.7 >= 3.7.
        assert_eq!(min_count_for_pct(3.7, 1000), 37);
        assert_eq!(min_count_for_pct(3.5, 1000), 35);
        assert_eq!(min_count_for_pct(50.0, 4), 2);
        assert_eq!(min_count_for_pct(0.1, 4), 1);
        // Unreachable thresholds land beyond the total.
        assert!(min_count_for_pct(101.0, 4) > 4);
    }

    #[test]
    fn canonical_order_is_length_then_lexicographic() {
        let mut patterns = vec![
            vec!["B".to_string()],
            vec!["A".to_string(), "B".to_string()],
            vec!["A".to_string()],
            vec!["A".to_string(), "A".to_string()],
        ];
        patterns.sort_by(|a, b| canonical_cmp(a, b));
        assert_eq!(
            patterns,
            vec![
                vec!["A".to_string()],
                vec!["B".to_string()],
                vec!["A".to_string(), "A".to_string()],
                vec!["A".to_string(), "B".to_string()],
            ]
        );
    }
}
