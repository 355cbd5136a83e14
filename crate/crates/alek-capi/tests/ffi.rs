//! Drives the exported C entry points exactly as a C caller would: raw
//! pointers in, error codes out, strings released through the ABI.

use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use alek_capi::{
    alek_classify, alek_last_error, alek_report_free, alek_report_regime, alek_report_to_json,
    alek_scenario_free, alek_scenario_parse, alek_string_free, alek_version, AlekReport,
    AlekScenario, ALEK_DOMAIN, ALEK_NULL_POINTER, ALEK_OK, ALEK_PARSE,
};

const EXISTENCE_PAIR: &str = r#"{
    "dimension": 2,
    "d": 1,
    "s_bar": 0.0,
    "points": [
        {"id": "north", "gamma": 2, "model": {"kind": "eguchi-hanson", "a": 1.0},
         "mu": [0.4], "laplacian_mu": [1.0]},
        {"id": "south", "gamma": 2, "model": {"kind": "eguchi-hanson", "a": 1.0},
         "mu": [-0.4], "laplacian_mu": [-1.0]}
    ]
}"#;

const OBSTRUCTED: &str = r#"{
    "dimension": 2,
    "d": 1,
    "s_bar": 0.0,
    "points": [
        {"id": "q", "gamma": 2,
         "model": {"kind": "custom", "e": 1.0, "c": 0.0, "xi_m": 0.0,
                   "rho_xi": -78.95683520871486, "a": 0.0, "scalar_flat": true},
         "mu": [1.0], "laplacian_mu": [0.0]}
    ]
}"#;

fn last_error() -> String {
    unsafe { CStr::from_ptr(alek_last_error()) }
        .to_str()
        .unwrap()
        .to_string()
}

fn parse(json: &str) -> *mut AlekScenario {
    let json = CString::new(json).unwrap();
    let mut scenario: *mut AlekScenario = ptr::null_mut();
    let code = unsafe { alek_scenario_parse(json.as_ptr(), &mut scenario) };
    assert_eq!(code, ALEK_OK, "{}", last_error());
    assert!(!scenario.is_null());
    scenario
}

fn classify(scenario: *const AlekScenario) -> *mut AlekReport {
    let mut report: *mut AlekReport = ptr::null_mut();
    let code = unsafe { alek_classify(scenario, 0.0, 0.0, &mut report) };
    assert_eq!(code, ALEK_OK, "{}", last_error());
    assert!(!report.is_null());
    report
}

fn take_string(code: c_int, raw: *mut c_char) -> String {
    assert_eq!(code, ALEK_OK, "{}", last_error());
    assert!(!raw.is_null());
    let text = unsafe { CStr::from_ptr(raw) }.to_str().unwrap().to_string();
    unsafe { alek_string_free(raw) };
    text
}

#[test]
fn version_matches_manifest() {
    let v = unsafe { CStr::from_ptr(alek_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn classify_round_trip_reports_regime_and_json() {
    let scenario = parse(EXISTENCE_PAIR);
    let report = classify(scenario);

    let mut raw: *mut c_char = ptr::null_mut();
    let code = unsafe { alek_report_regime(report, &mut raw) };
    let regime = take_string(code, raw);
    assert_eq!(regime, "existence (all zero mass)");

    let mut raw: *mut c_char = ptr::null_mut();
    let code = unsafe { alek_report_to_json(report, &mut raw) };
    let json = take_string(code, raw);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["verdict"]["regime"], "ExistenceAllZeroMass");
    assert_eq!(value["metadata"].get("timestamp_unix"), None);
    assert!(value["schedule_table"].is_array());

    unsafe {
        alek_report_free(report);
        alek_scenario_free(scenario);
    }
}

#[test]
fn report_json_is_byte_reproducible() {
    let render = || {
        let scenario = parse(OBSTRUCTED);
        let report = classify(scenario);
        let mut raw: *mut c_char = ptr::null_mut();
        let code = unsafe { alek_report_to_json(report, &mut raw) };
        let json = take_string(code, raw);
        unsafe {
            alek_report_free(report);
            alek_scenario_free(scenario);
        }
        json
    };
    assert_eq!(render(), render());
}

#[test]
fn obstructed_scenario_reports_non_existence() {
    let scenario = parse(OBSTRUCTED);
    let report = classify(scenario);
    let mut raw: *mut c_char = ptr::null_mut();
    let code = unsafe { alek_report_regime(report, &mut raw) };
    assert_eq!(take_string(code, raw), "non-existence (equal scale)");
    unsafe {
        alek_report_free(report);
        alek_scenario_free(scenario);
    }
}

#[test]
fn parse_failures_set_code_and_message() {
    let mut scenario: *mut AlekScenario = ptr::null_mut();

    let bad = CString::new("{not json").unwrap();
    let code = unsafe { alek_scenario_parse(bad.as_ptr(), &mut scenario) };
    assert_eq!(code, ALEK_PARSE);
    assert!(scenario.is_null());
    assert!(!last_error().is_empty());

    let code = unsafe { alek_scenario_parse(ptr::null(), &mut scenario) };
    assert_eq!(code, ALEK_NULL_POINTER);

    let good = CString::new(EXISTENCE_PAIR).unwrap();
    let code = unsafe { alek_scenario_parse(good.as_ptr(), ptr::null_mut()) };
    assert_eq!(code, ALEK_NULL_POINTER);
}

#[test]
fn invalid_tolerances_report_domain_error() {
    let scenario = parse(EXISTENCE_PAIR);
    let mut report: *mut AlekReport = ptr::null_mut();
    // rank_tol must stay below 1; 2.0 is an override, not a default request.
    let code = unsafe { alek_classify(scenario, 0.0, 2.0, &mut report) };
    assert_eq!(code, ALEK_DOMAIN);
    assert!(report.is_null());
    assert!(last_error().contains("rank_tol"));
    unsafe { alek_scenario_free(scenario) };
}

#[test]
fn classify_rejects_null_arguments() {
    let mut report: *mut AlekReport = ptr::null_mut();
    let code = unsafe { alek_classify(ptr::null(), 0.0, 0.0, &mut report) };
    assert_eq!(code, ALEK_NULL_POINTER);

    let scenario = parse(EXISTENCE_PAIR);
    let code = unsafe { alek_classify(scenario, 0.0, 0.0, ptr::null_mut()) };
    assert_eq!(code, ALEK_NULL_POINTER);
    unsafe { alek_scenario_free(scenario) };
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        alek_scenario_free(ptr::null_mut());
        alek_report_free(ptr::null_mut());
        alek_string_free(ptr::null_mut());
    }
}
