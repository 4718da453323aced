//! C ABI over the seqcompose library: dataset generation, log loading,
//! mining, and rule scoring behind opaque handles and status codes.
//!
//! Conventions:
//!
//! * Every fallible function returns a [`SeqcStatus`]; `SEQC_STATUS_OK` is 0.
//!   On failure, [`seqc_last_error`] returns a message for the current thread.
//! * Handles (`SeqcSessions`, `SeqcRules`) are opaque and must be released
//!   with their matching `*_free` function exactly once.
//! * Strings returned through out-parameters are NUL-terminated, owned by the
//!   caller, and must be released with [`seqc_string_free`].
//! * No function panics: all failure paths report through the status code.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;

use seqcompose::error::Error;
use seqcompose::log::{parse_log, sessionize};
use seqcompose::miners::{self, Algorithm, AssociationRule, MiningParams};
use seqcompose::multilevel::{self, MultilevelParams};
use seqcompose::pattern::HierarchyLevel;
use seqcompose::types::Session;
use seqcompose::workload::{generate_dataset, read_compositions, write_dataset, GeneratorConfig};

/// Result of every fallible call. Failure codes mirror the library's error
/// classes; `SEQC_STATUS_NULL_ARGUMENT` and `SEQC_STATUS_INVALID_UTF8` are
/// raised at the boundary itself.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Config = 4,
    Mining = 5,
    Eval = 6,
    Io = 7,
}

/// A loaded invocation log, grouped into sessions. Opaque.
pub struct SeqcSessions {
    sessions: Vec<Session>,
}

/// A ranked list of mined association rules. Opaque.
pub struct SeqcRules {
    rules: Vec<AssociationRule>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: SeqcStatus, message: &str) -> SeqcStatus {
    // A NUL inside the message would truncate it; no library message
    // contains one, but replace defensively rather than panic.
    let safe = message.replace('\0', "?");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(safe).unwrap_or_default());
    status
}

fn fail_with(err: Error) -> SeqcStatus {
    let status = match err.class() {
        "parse" => SeqcStatus::Parse,
        "config" => SeqcStatus::Config,
        "mine" => SeqcStatus::Mining,
        "eval" => SeqcStatus::Eval,
        _ => SeqcStatus::Io,
    };
    fail(status, &format!("{err}"))
}

/// Borrows a C string argument as UTF-8, reporting boundary errors.
///
/// # Safety
/// `ptr` must be NULL or point to a NUL-terminated string.
unsafe fn utf8_arg<'a>(name: &str, ptr: *const c_char) -> Result<&'a str, SeqcStatus> {
    if ptr.is_null() {
        return Err(fail(
            SeqcStatus::NullArgument,
            &format!("{name} must not be NULL"),
        ));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(SeqcStatus::InvalidUtf8, &format!("{name} is not valid UTF-8")))
}

/// Message of the most recent failure on the calling thread, or an empty
/// string. The pointer stays valid until the next failing call on the same
/// thread; do not free it.
#[no_mangle]
pub extern "C" fn seqc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned through an out-parameter.
///
/// # Safety
/// `s` must be NULL or a pointer previously returned by this library through
/// a `char **` out-parameter, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn seqc_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: per the contract, `s` came from CString::into_raw.
        drop(CString::from_raw(s));
    }
}

/// Generates a synthetic dataset and writes `log.csv`, `catalog.json`,
/// `compositions.json` and `manifest.json` into `out_dir`. `config_json` is
/// a JSON object of generator settings; missing keys use the defaults, and
/// NULL means all defaults.
///
/// # Safety
/// `config_json` must be NULL or a NUL-terminated string; `out_dir` must be
/// a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn seqc_generate_dataset(
    config_json: *const c_char,
    out_dir: *const c_char,
) -> SeqcStatus {
    let dir = match utf8_arg("out_dir", out_dir) {
        Ok(dir) => dir,
        Err(status) => return status,
    };
    let config = if config_json.is_null() {
        GeneratorConfig::default()
    } else {
        let text = match utf8_arg("config_json", config_json) {
            Ok(text) => text,
            Err(status) => return status,
        };
        match serde_json::from_str(text) {
            Ok(config) => config,
            Err(e) => return fail(SeqcStatus::Config, &format!("config_json: {e}")),
        }
    };
    let dataset = match generate_dataset(&config) {
        Ok(dataset) => dataset,
        Err(e) => return fail_with(e),
    };
    match write_dataset(Path::new(dir), &dataset) {
        Ok(()) => SeqcStatus::Ok,
        Err(e) => fail_with(e),
    }
}

/// Loads an invocation log CSV and groups it into sessions. On success,
/// stores a new handle in `*out`; release it with [`seqc_sessions_free`].
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn seqc_sessions_load_csv(
    path: *const c_char,
    out: *mut *mut SeqcSessions,
) -> SeqcStatus {
    if out.is_null() {
        return fail(SeqcStatus::NullArgument, "out must not be NULL");
    }
    let path = match utf8_arg("path", path) {
        Ok(path) => path,
        Err(status) => return status,
    };
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) => return fail_with(Error::io(path, e)),
    };
    let records = match parse_log(&text) {
        Ok(records) => records,
        Err(e) => return fail_with(e),
    };
    let handle = Box::new(SeqcSessions {
        sessions: sessionize(&records),
    });
    *out = Box::into_raw(handle);
    SeqcStatus::Ok
}

/// Number of sessions behind the handle; 0 for NULL.
///
/// # Safety
/// `sessions` must be NULL or a live handle from [`seqc_sessions_load_csv`].
#[no_mangle]
pub unsafe extern "C" fn seqc_sessions_count(sessions: *const SeqcSessions) -> usize {
    if sessions.is_null() {
        return 0;
    }
    (*sessions).sessions.len()
}

/// Releases a sessions handle.
///
/// # Safety
/// `sessions` must be NULL or a handle from [`seqc_sessions_load_csv`] that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn seqc_sessions_free(sessions: *mut SeqcSessions) {
    if !sessions.is_null() {
        // SAFETY: per the contract, the handle came from Box::into_raw.
        drop(Box::from_raw(sessions));
    }
}

/// Mines the sessions into ranked association rules. `algorithm` is one of
/// `apriori`, `patterngrowth`, `closed` or `multilevel`; thresholds are
/// percentages. Baseline algorithms mine operation-level patterns directly;
/// `multilevel` runs the two-level pipeline. On success, stores a new handle
/// in `*out`; release it with [`seqc_rules_free`].
///
/// # Safety
/// `sessions` must be a live handle, `algorithm` a NUL-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn seqc_mine(
    sessions: *const SeqcSessions,
    algorithm: *const c_char,
    min_support_pct: f64,
    min_confidence_pct: f64,
    out: *mut *mut SeqcRules,
) -> SeqcStatus {
    if sessions.is_null() || out.is_null() {
        return fail(SeqcStatus::NullArgument, "sessions and out must not be NULL");
    }
    let name = match utf8_arg("algorithm", algorithm) {
        Ok(name) => name,
        Err(status) => return status,
    };
    let algorithm: Algorithm = match name.parse() {
        Ok(algorithm) => algorithm,
        Err(e) => return fail_with(e),
    };
    let sessions = &(*sessions).sessions;

    let rules = match algorithm {
        Algorithm::Multilevel => {
            let params = MultilevelParams::new(min_support_pct, min_confidence_pct);
            match multilevel::recommend(sessions, &params) {
                Ok(rec) => rec.rules,
                Err(e) => return fail_with(e),
            }
        }
        baseline => {
            let params = MiningParams {
                min_support_pct,
                min_confidence_pct,
                level: HierarchyLevel::Operation,
                max_pattern_length: None,
            };
            let frequent = match miners::mine(baseline, sessions, &params) {
                Ok(frequent) => frequent,
                Err(e) => return fail_with(e),
            };
            match miners::generate_rules(&frequent, sessions, min_confidence_pct) {
                Ok(mut rules) => {
                    miners::rank_rules(&mut rules);
                    rules
                }
                Err(e) => return fail_with(e),
            }
        }
    };
    *out = Box::into_raw(Box::new(SeqcRules { rules }));
    SeqcStatus::Ok
}

/// Number of rules behind the handle; 0 for NULL.
///
/// # Safety
/// `rules` must be NULL or a live handle from [`seqc_mine`].
#[no_mangle]
pub unsafe extern "C" fn seqc_rules_count(rules: *const SeqcRules) -> usize {
    if rules.is_null() {
        return 0;
    }
    (*rules).rules.len()
}

/// Serializes the rules to JSON lines (one rule object per line). On
/// success, stores a newly allocated string in `*out`; release it with
/// [`seqc_string_free`].
///
/// # Safety
/// `rules` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn seqc_rules_to_jsonl(
    rules: *const SeqcRules,
    out: *mut *mut c_char,
) -> SeqcStatus {
    if rules.is_null() || out.is_null() {
        return fail(SeqcStatus::NullArgument, "rules and out must not be NULL");
    }
    let text = miners::rules_to_jsonl(&(*rules).rules);
    match CString::new(text) {
        Ok(text) => {
            *out = text.into_raw();
            SeqcStatus::Ok
        }
        Err(_) => fail(SeqcStatus::Eval, "serialized rules contain a NUL byte"),
    }
}

/// Scores the rules against the ground-truth compositions file written by
/// [`seqc_generate_dataset`]: `*precision_out` becomes the percentage of
/// compositions reconstructed by some rule, `*noise_out` the ratio of
/// generated rules to expected associations.
///
/// # Safety
/// `rules` must be a live handle, `compositions_path` a NUL-terminated
/// string, and both out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn seqc_eval_rules(
    rules: *const SeqcRules,
    compositions_path: *const c_char,
    precision_out: *mut f64,
    noise_out: *mut f64,
) -> SeqcStatus {
    if rules.is_null() || precision_out.is_null() || noise_out.is_null() {
        return fail(
            SeqcStatus::NullArgument,
            "rules, precision_out and noise_out must not be NULL",
        );
    }
    let path = match utf8_arg("compositions_path", compositions_path) {
        Ok(path) => path,
        Err(status) => return status,
    };
    let compositions = match read_compositions(Path::new(path)) {
        Ok(compositions) => compositions,
        Err(e) => return fail_with(e),
    };
    let rules = &(*rules).rules;
    let matching = match seqcompose::eval::match_rules(
        rules,
        &compositions,
        &seqcompose::eval::MatchCriteria::default(),
    ) {
        Ok(matching) => matching,
        Err(e) => return fail_with(e),
    };
    let precision = match seqcompose::eval::precision_pct(matching, compositions.len()) {
        Ok(precision) => precision,
        Err(e) => return fail_with(e),
    };
    let noise = match seqcompose::eval::noise_ratio(rules.len(), compositions.len()) {
        Ok(noise) => noise,
        Err(e) => return fail_with(e),
    };
    *precision_out = precision;
    *noise_out = noise;
    SeqcStatus::Ok
}

/// Releases a rules handle.
///
/// # Safety
/// `rules` must be NULL or a handle from [`seqc_mine`] that has not been
/// freed yet.
#[no_mangle]
pub unsafe extern "C" fn seqc_rules_free(rules: *mut SeqcRules) {
    if !rules.is_null() {
        // SAFETY: per the contract, the handle came from Box::into_raw.
        drop(Box::from_raw(rules));
    }
}
