//! Domain types shared by the generator, the miners and the evaluator.

use std::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rejects characters that would corrupt the CSV encoding of a log cell.
fn check_csv_safe(kind: &str, value: &str) -> Result<()> {
    if value.is_empty() {
        return Err(Error::Config(format!("{kind} must not be empty")));
    }
    if value.contains(',') || value.contains('\n') || value.contains('\r') {
        return Err(Error::Config(format!(
            "{kind} {value:?} contains a comma or newline, which the log format cannot carry"
        )));
    }
    Ok(())
}

/// Name of a web service in the catalog, e.g. `WS12`.
///
/// Service names also prefix dotted operation labels (`WS12.op3`), so on top
/// of being CSV-safe they must not contain a dot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ServiceId(String);

impl ServiceId {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        check_csv_safe("service name", &name)?;
        if name.contains('.') {
            return Err(Error::Config(format!(
                "service name {name:?} contains a dot, which is reserved for operation labels"
            )));
        }
        Ok(ServiceId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ServiceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One service invocation: which operation of which service was called.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Invocation {
    pub service: ServiceId,
    pub operation: String,
}

impl Invocation {
    pub fn new(service: ServiceId, operation: impl Into<String>) -> Result<Self> {
        let operation = operation.into();
        check_csv_safe("operation name", &operation)?;
        Ok(Invocation { service, operation })
    }

    /// Dotted label used at the operation level, e.g. `WS3.op2`.
    pub fn label(&self) -> String {
        format!("{}.{}", self.service, self.operation)
    }
}

/// One parsed log row. Timestamps are UTC with millisecond resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogRecord {
    pub session_id: String,
    pub timestamp: DateTime<Utc>,
    pub invocation: Invocation,
    pub response_time_ms: u64,
    pub response_size_bytes: u64,
}

/// All invocations of one client session, ordered by timestamp.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    pub id: String,
    pub invocations: Vec<Invocation>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn service_id_rejects_unsafe_names() {
        assert!(ServiceId::new("WS1").is_ok());
        assert!(ServiceId::new("").is_err());
        assert!(ServiceId::new("a,b").is_err());
        assert!(ServiceId::new("a\nb").is_err());
        assert!(ServiceId::new("a.b").is_err());
    }

    #[test]
    fn invocation_label_joins_service_and_operation() {
        let inv = Invocation::new(ServiceId::new("WS3").unwrap(), "op2").unwrap();
        assert_eq!(inv.label(), "WS3.op2");
    }

    #[test]
    fn operation_must_be_csv_safe() {
        let ws = ServiceId::new("WS1").unwrap();
        assert!(Invocation::new(ws.clone(), "op,1").is_err());
        assert!(Invocation::new(ws, "").is_err());
    }
}
