//! Helpers for building in-memory sessions in unit tests.

use crate::types::{Invocation, ServiceId, Session};

/// Builds sessions from bare service names; every invocation uses the same
/// operation, so service-level and operation-level projections coincide
/// modulo the `.op1` suffix.
pub fn sessions_from_services(specs: &[&[&str]]) -> Vec<Session> {
    sessions_from_labels(specs)
}

/// Builds sessions from labels of the form `"A"` (operation defaults to
/// `op1`) or `"A.x"` (explicit operation).
pub fn sessions_from_labels(specs: &[&[&str]]) -> Vec<Session> {
    specs
        .iter()
        .enumerate()
        .map(|(i, labels)| Session {
            id: format!("s{}", i + 1),
            invocations: labels
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
