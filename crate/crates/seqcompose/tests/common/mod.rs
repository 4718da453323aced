//! Shared helpers for the integration suites: session builders, a random
//! small-log generator, and a brute-force frequent-pattern oracle that the
//! miners are checked against.

#![allow(dead_code)] // each integration test binary uses a different subset

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use seqcompose::pattern::{project, HierarchyLevel};
use seqcompose::types::{Invocation, ServiceId, Session};

/// Builds sessions from item labels: `"A"` means service A, operation `op1`;
/// `"A.x"` names the operation explicitly.
pub fn sessions_from(specs: &[&[&str]]) -> Vec<Session> {
    specs
        .iter()
        .enumerate()
        .map(|(i, items)| Session {
            id: format!("s{}", i + 1),
            invocations: items
                .iter()
                .map(|label| {
                    let (service, operation) = match label.split_once('.') {
                        Some((s, o)) => (s, o),
                        None => (*label, "op1"),
                    };
                    Invocation::new(ServiceId::new(service).unwrap(), operation).unwrap()
                })
                .collect(),
        })
        .collect()
}

/// Pool of invocations the random logs draw from: five distinct operation
/// labels over four services, so the service level sees collapses (A.x and
/// A.y both project to A) and the operation level sees repeats.
const RANDOM_POOL: [(&str, &str); 5] = [("A", "x"), ("A", "y"), ("B", "x"), ("C", "x"), ("D", "x")];

/// Generates a small random log: up to `max_sessions` sessions of up to
/// `max_len` invocations drawn from [`RANDOM_POOL`]. Sized for exhaustive
/// brute-force checking.
pub fn random_log(rng: &mut ChaCha8Rng, max_sessions: usize, max_len: usize) -> Vec<Session> {
    let n_sessions = rng.random_range(1..=max_sessions);
    (1..=n_sessions)
        .map(|i| Session {
            id: format!("s{i}"),
            invocations: (0..rng.random_range(1..=max_len))
                .map(|_| {
                    let (s, o) = RANDOM_POOL[rng.random_range(0..RANDOM_POOL.len())];
                    Invocation::new(ServiceId::new(s).unwrap(), o).unwrap()
                })
                .collect(),
        })
        .collect()
}

/// Subsequence containment written independently of the library (recursive
/// match-or-skip instead of the library's iterator walk), so the oracle does
/// not inherit a library bug.
pub fn oracle_contains(needle: &[String], haystack: &[String]) -> bool {
    match (needle.first(), haystack.first()) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(n), Some(h)) if n == h => oracle_contains(&needle[1..], &haystack[1..]),
        _ => oracle_contains(needle, &haystack[1..]),
    }
}

/// Every distinct non-empty subsequence of `items`, by index subset.
fn all_subsequences(items: &[String]) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << items.len()) {
        let sub: Vec<String> = items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, item)| item.clone())
            .collect();
        out.push(sub);
    }
    out.sort();
    out.dedup();
    out
}

/// Brute-force reference miner: enumerates every subsequence of every
/// session's projection, counts supporting sessions for each, and keeps the
/// ones whose percentage clears the threshold. Exponential in session length,
/// which is fine for the small logs it is used on.
pub fn brute_force_frequent(
    sessions: &[Session],
    level: HierarchyLevel,
    min_support_pct: f64,
) -> BTreeMap<Vec<String>, usize> {
    let projections: Vec<Vec<String>> = sessions.iter().map(|s| project(s, level)).collect();
    let mut candidates: Vec<Vec<String>> = Vec::new();
    for p in &projections {
        candidates.extend(all_subsequences(p));
    }
    candidates.sort();
    candidates.dedup();

    let total = sessions.len();
    let mut frequent = BTreeMap::new();
    for candidate in candidates {
        let count = projections
            .iter()
            .filter(|p| oracle_contains(&candidate, p))
            .count();
        if total > 0 && 100.0 * count as f64 / total as f64 >= min_support_pct {
            frequent.insert(candidate, count);
        }
    }
    frequent
}

/// Closed-pattern reference: drops every frequent pattern that has a strictly
/// longer frequent supersequence with the same support.
pub fn brute_force_closed(
    frequent: &BTreeMap<Vec<String>, usize>,
) -> BTreeMap<Vec<String>, usize> {
    frequent
        .iter()
        .filter(|(items, count)| {
            !frequent.iter().any(|(other, other_count)| {
                other.len() > items.len()
                    && other_count == *count
                    && oracle_contains(items, other)
            })
        })
        .map(|(items, count)| (items.clone(), *count))
        .collect()
}
