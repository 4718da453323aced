//! Invocation-log CSV parsing, serialization and session grouping.
//!
//! The on-disk format is a fixed six-column CSV with no quoting and UNIX
//! newlines; see [`LOG_HEADER`]. Timestamps are ISO-8601 UTC with exactly
//! three fractional digits and a literal `Z`.

use chrono::{DateTime, Utc};

use crate::error::{Error, Result};
use crate::types::{Invocation, LogRecord, ServiceId, Session};

/// The exact header line every log file starts with.
pub const LOG_HEADER: &str =
    "session_id,timestamp,service,operation,response_time_ms,response_size_bytes";

/// Render format: `2024-01-01T00:00:00.000Z`.
const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%S%.3fZ";

/// Formats a timestamp in the log's canonical form.
pub fn format_timestamp(t: &DateTime<Utc>) -> String {
    t.format(TIMESTAMP_FORMAT).to_string()
}

fn parse_timestamp(raw: &str, line: usize) -> Result<DateTime<Utc>> {
    let parsed = DateTime::parse_from_rfc3339(raw).map_err(|e| Error::Parse {
        line,
        message: format!("invalid timestamp {raw:?}: {e}"),
    })?;
    let utc = parsed.with_timezone(&Utc);
    // The format carries millisecond resolution; drop anything finer so that
    // parse and serialize round-trip exactly.
    let millis = utc.timestamp_millis();
    DateTime::from_timestamp_millis(millis).ok_or_else(|| Error::Parse {
        line,
        message: format!("timestamp {raw:?} is out of range"),
    })
}

fn parse_u64(raw: &str, what: &str, line: usize) -> Result<u64> {
    raw.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} {raw:?}: expected an unsigned integer"),
    })
}

/// Parses a complete log file into records, preserving file order.
///
/// The header line is mandatory; a header-only file yields an empty list.
/// Any malformed row fails with an error naming its 1-based line number.
pub fn parse_log(input: &str) -> Result<Vec<LogRecord>> {
    // A single trailing newline is part of the format; anything else that
    // produces an empty row is a blank line and gets rejected below.
    let body = input.strip_suffix('\n').unwrap_or(input);
    let mut lines = body.split('\n').enumerate();
    match lines.next() {
        Some((_, first)) if first == LOG_HEADER => {}
        Some((_, first)) => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header {LOG_HEADER:?}, found {first:?}"),
            })
        }
        None => unreachable!("split always yields at least one segment"),
    }

    let mut records = Vec::new();
    for (idx, row) in lines {
        let line = idx + 1;
        if row.is_empty() {
            return Err(Error::Parse {
                line,
                message: "blank line".into(),
            });
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Parse {
                line,
                message: format!("expected 6 fields, found {}", fields.len()),
            });
        }
        if fields[0].is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty session_id".into(),
            });
        }
        let service = ServiceId::new(fields[2]).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        let invocation = Invocation::new(service, fields[3]).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        records.push(LogRecord {
            session_id: fields[0].to_string(),
            timestamp: parse_timestamp(fields[1], line)?,
            invocation,
            response_time_ms: parse_u64(fields[4], "response_time_ms", line)?,
            response_size_bytes: parse_u64(fields[5], "response_size_bytes", line)?,
        });
    }
    Ok(records)
}

/// Serializes records into the canonical CSV form, header included.
pub fn serialize_log(records: &[LogRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(LOG_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.session_id);
        out.push(',');
        out.push_str(&format_timestamp(&r.timestamp));
        out.push(',');
        out.push_str(r.invocation.service.as_str());
        out.push(',');
        out.push_str(&r.invocation.operation);
        out.push(',');
        out.push_str(&r.response_time_ms.to_string());
        out.push(',');
        out.push_str(&r.response_size_bytes.to_string());
        out.push('\n');
    }
    out
}

/// Groups records into per-session invocation sequences.
///
/// Within a session, records are ordered by timestamp; ties keep file order.
/// The session list itself is ordered by each id's first appearance.
pub fn sessionize(records: &[LogRecord]) -> Vec<Session> {
    let mut order: Vec<&str> = Vec::new();
    let mut index: std::collections::HashMap<&str, usize> = std::collections::HashMap::new();
    let mut grouped: Vec<Vec<(DateTime<Utc>, &Invocation)>> = Vec::new();

    for r in records {
        let slot = *index.entry(r.session_id.as_str()).or_insert_with(|| {
            order.push(r.session_id.as_str());
            grouped.push(Vec::new());
            grouped.len() - 1
        });
        grouped[slot].push((r.timestamp, &r.invocation));
    }

    order
        .into_iter()
        .zip(grouped)
        .map(|(id, mut rows)| {
            // Stable sort: equal timestamps keep their file order.
            rows.sort_by_key(|(t, _)| *t);
            Session {
                id: id.to_string(),
                invocations: rows.into_iter().map(|(_, inv)| inv.clone()).collect(),
            }
        })
        .collect()
}
