//! Level-wise frequent-sequence mining.
//!
//! Classic generate-and-test: length-k survivors are joined into length-k+1
//! candidates (suffix of one equals prefix of the other), candidates with an
//! infrequent subsequence are pruned before counting, and support counting
//! verifies ordered containment only in sessions that pass a per-item bitset
//! intersection.

use std::collections::{HashMap, HashSet};

use crate::error::Result;
use crate::pattern::is_subsequence;
use crate::types::Session;

use super::{absolute_threshold, into_patterns, FrequentSet, MiningParams, MiningStats, ProjectedLog};

pub fn mine_apriori(sessions: &[Session], params: &MiningParams) -> Result<FrequentSet> {
    params.validate()?;
    let log = ProjectedLog::build(sessions, params.level);
    let min_count = absolute_threshold(params, log.total());
    let bitsets = log.item_bitsets();

    // Length 1: every distinct item is a candidate.
    let mut item_counts: HashMap<u32, usize> = HashMap::new();
    for session in &log.sessions {
        let mut seen: HashSet<u32> = HashSet::new();
        for &item in session {
            if seen.insert(item) {
                *item_counts.entry(item).or_insert(0) += 1;
            }
        }
    }
    let mut candidate_count = item_counts.len();
    let mut current: Vec<(Vec<u32>, usize)> = item_counts
        .into_iter()
        .filter(|&(_, count)| count >= min_count)
        .map(|(item, count)| (vec![item], count))
        .collect();
    current.sort();

    let mut all_frequent: Vec<(Vec<u32>, usize)> = current.clone();
    let mut length = 1usize;

    while !current.is_empty() {
        if params.max_pattern_length == Some(length) {
            break;
        }
        let frequent_at_k: HashSet<&[u32]> =
            current.iter().map(|(items, _)| items.as_slice()).collect();

        // Join step: p extends q when p's suffix equals q's prefix.
        let mut by_prefix: HashMap<&[u32], Vec<&[u32]>> = HashMap::new();
        for (items, _) in &current {
            by_prefix.entry(&items[..length - 1]).or_default().push(items);
        }
        let mut candidates: Vec<Vec<u32>> = Vec::new();
        for (items, _) in &current {
            if let Some(extensions) = by_prefix.get(&items[1..]) {
                for ext in extensions {
                    let mut candidate = items.clone();
                    candidate.push(ext[length - 1]);
                    candidates.push(candidate);
                }
            }
        }

        // Prune step: every length-k subsequence must itself be frequent.
        // Dropping the first or last item reproduces the join parents, so
        // only the interior deletions need checking.
        candidates.retain(|candidate| {
            (1..length).all(|skip| {
                let mut shorter = Vec::with_capacity(length);
                shorter.extend_from_slice(&candidate[..skip]);
                shorter.extend_from_slice(&candidate[skip + 1..]);
                frequent_at_k.contains(shorter.as_slice())
            })
        });
        candidate_count += candidates.len();

        // Count step: intersect the candidate's item bitsets, then verify
        // order in the surviving sessions only.
        let words = log.total().div_ceil(64);
        let mut next: Vec<(Vec<u32>, usize)> = Vec::new();
        let mut mask = vec![0u64; words];
        for candidate in candidates {
            mask.fill(u64::MAX);
            for &item in &candidate {
                for (w, bits) in bitsets[item as usize].iter().enumerate() {
                    mask[w] &= bits;
                }
            }
            let mut count = 0usize;
            for (w, bits) in mask.iter().enumerate() {
                let mut bits = *bits;
                while bits != 0 {
                    let s = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if s < log.total() && is_subsequence(&candidate, &log.sessions[s]) {
                        count += 1;
                    }
                }
            }
            if count >= min_count {
                next.push((candidate, count));
            }
        }
        next.sort();
        all_frequent.extend(next.iter().cloned());
        current = next;
        length += 1;
    }

    let patterns = into_patterns(all_frequent, &log);
    let stats = MiningStats {
        candidate_count,
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
