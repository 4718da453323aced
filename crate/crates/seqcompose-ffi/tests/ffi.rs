//! Exercises the C ABI exactly as a C caller would: through the exported
//! unsafe functions, pointers and status codes.

use std::ffi::{CStr, CString};
use std::ptr;

use seqcompose_ffi::{
    seqc_eval_rules, seqc_generate_dataset, seqc_last_error, seqc_mine, seqc_rules_count,
    seqc_rules_free, seqc_rules_to_jsonl, seqc_sessions_count, seqc_sessions_free,
    seqc_sessions_load_csv, seqc_string_free, SeqcRules, SeqcSessions, SeqcStatus,
};

fn cstring(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(seqc_last_error()) }
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn full_generate_load_mine_eval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = cstring(dir.path().to_str().unwrap());
    let config = cstring(
        r#"{"n_services":12,"n_compositions":4,"n_sessions":100,
            "noise_invocations_per_session_range":[4,8],"plant_gap_range":[2,4],"seed":7}"#,
    );

    let status = unsafe { seqc_generate_dataset(config.as_ptr(), out_dir.as_ptr()) };
    assert_eq!(status, SeqcStatus::Ok, "generate failed: {}", last_error());

    let log_path = cstring(dir.path().join("log.csv").to_str().unwrap());
    let mut sessions: *mut SeqcSessions = ptr::null_mut();
    let status = unsafe { seqc_sessions_load_csv(log_path.as_ptr(), &mut sessions) };
    assert_eq!(status, SeqcStatus::Ok, "load failed: {}", last_error());
    assert_eq!(unsafe { seqc_sessions_count(sessions) }, 100);

    let algorithm = cstring("multilevel");
    let mut rules: *mut SeqcRules = ptr::null_mut();
    let status = unsafe { seqc_mine(sessions, algorithm.as_ptr(), 10.0, 30.0, &mut rules) };
    assert_eq!(status, SeqcStatus::Ok, "mine failed: {}", last_error());
    let rule_count = unsafe { seqc_rules_count(rules) };
    assert!(rule_count > 0, "expected some rules");

    let mut jsonl: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe { seqc_rules_to_jsonl(rules, &mut jsonl) };
    assert_eq!(status, SeqcStatus::Ok);
    let text = unsafe { CStr::from_ptr(jsonl) }.to_str().unwrap();
    assert_eq!(text.lines().count(), rule_count);
    assert!(text.starts_with("{\"antecedent\":"));
    unsafe { seqc_string_free(jsonl) };

    let comps_path = cstring(dir.path().join("compositions.json").to_str().unwrap());
    let mut precision = -1.0f64;
    let mut noise = -1.0f64;
    let status =
        unsafe { seqc_eval_rules(rules, comps_path.as_ptr(), &mut precision, &mut noise) };
    assert_eq!(status, SeqcStatus::Ok, "eval failed: {}", last_error());
    assert!((0.0..=100.0).contains(&precision), "precision {precision}");
    assert!(noise >= 0.0, "noise {noise}");

    unsafe {
        seqc_rules_free(rules);
        seqc_sessions_free(sessions);
    }
}

#[test]
fn null_arguments_are_rejected_not_dereferenced() {
    let mut sessions: *mut SeqcSessions = ptr::null_mut();
    let status = unsafe { seqc_sessions_load_csv(ptr::null(), &mut sessions) };
    assert_eq!(status, SeqcStatus::NullArgument);
    assert!(last_error().contains("path"), "message: {}", last_error());

    let path = cstring("whatever.csv");
    let status = unsafe { seqc_sessions_load_csv(path.as_ptr(), ptr::null_mut()) };
    assert_eq!(status, SeqcStatus::NullArgument);

    let algorithm = cstring("apriori");
    let mut rules: *mut SeqcRules = ptr::null_mut();
    let status =
        unsafe { seqc_mine(ptr::null(), algorithm.as_ptr(), 10.0, 10.0, &mut rules) };
    assert_eq!(status, SeqcStatus::NullArgument);

    // NULL handles are tolerated by the read-only and free functions.
    assert_eq!(unsafe { seqc_sessions_count(ptr::null()) }, 0);
    assert_eq!(unsafe { seqc_rules_count(ptr::null()) }, 0);
    unsafe {
        seqc_sessions_free(ptr::null_mut());
        seqc_rules_free(ptr::null_mut());
        seqc_string_free(ptr::null_mut());
    }
}

#[test]
fn failures_set_classified_status_and_message() {
    // Missing file -> Io.
    let path = cstring("/nonexistent/log.csv");
    let mut sessions: *mut SeqcSessions = ptr::null_mut();
    let status = unsafe { seqc_sessions_load_csv(path.as_ptr(), &mut sessions) };
    assert_eq!(status, SeqcStatus::Io);
    assert!(sessions.is_null());
    assert!(last_error().contains("/nonexistent/log.csv"));

    // Unknown algorithm -> Config.
    let dir = tempfile::tempdir().unwrap();
    let out_dir = cstring(dir.path().to_str().unwrap());
    let config = cstring(r#"{"n_services":8,"n_compositions":3,"n_sessions":30,"seed":3}"#);
    assert_eq!(
        unsafe { seqc_generate_dataset(config.as_ptr(), out_dir.as_ptr()) },
        SeqcStatus::Ok
    );
    let log_path = cstring(dir.path().join("log.csv").to_str().unwrap());
    assert_eq!(
        unsafe { seqc_sessions_load_csv(log_path.as_ptr(), &mut sessions) },
        SeqcStatus::Ok
    );
    let bogus = cstring("gsp2000");
    let mut rules: *mut SeqcRules = ptr::null_mut();
    let status = unsafe { seqc_mine(sessions, bogus.as_ptr(), 10.0, 10.0, &mut rules) };
    assert_eq!(status, SeqcStatus::Config);
    assert!(last_error().contains("gsp2000"), "message: {}", last_error());

    // Invalid threshold -> Mining.
    let apriori = cstring("apriori");
    let status = unsafe { seqc_mine(sessions, apriori.as_ptr(), 0.0, 10.0, &mut rules) };
    assert_eq!(status, SeqcStatus::Mining);

    // Malformed generator config -> Config.
    let broken = cstring(r#"{"n_services": "many"}"#);
    let status = unsafe { seqc_generate_dataset(broken.as_ptr(), out_dir.as_ptr()) };
    assert_eq!(status, SeqcStatus::Config);

    unsafe { seqc_sessions_free(sessions) };
}

#[test]
fn generated_header_declares_the_full_api() {
    let header = include_str!("../include/seqcompose.h");
    for symbol in [
        "seqc_generate_dataset",
        "seqc_sessions_load_csv",
        "seqc_sessions_count",
        "seqc_sessions_free",
        "seqc_mine",
        "seqc_rules_count",
        "seqc_rules_to_jsonl",
        "seqc_eval_rules",
        "seqc_rules_free",
        "seqc_last_error",
        "seqc_string_free",
        "SEQC_STATUS_OK",
    ] {
        assert!(header.contains(symbol), "{symbol} missing from the header");
    }
}
