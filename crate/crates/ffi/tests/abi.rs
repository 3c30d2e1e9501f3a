use std::ffi::{CStr, CString};
use std::ptr;

use obf_core::cli::doc::foliation_document;
use obf_core::cli::generate::{grow_sphere, GrowConfig};
use obf_core::foliation::standard::split_sphere;
use obf_ffi::*;

fn load(json: &str) -> (ObfStatus, *mut ObfFoliation) {
    let text = CString::new(json).unwrap();
    let mut f = ptr::null_mut();
    let status = unsafe { obf_foliation_from_json(text.as_ptr(), &mut f) };
    (status, f)
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(obf_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { obf_string_free(s) };
    out
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(obf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn handles_round_trip_the_canonical_document() {
    let doc = foliation_document(&split_sphere()).unwrap();
    let (status, f) = load(&doc);
    assert_eq!(status, ObfStatus::Ok);
    assert_eq!(unsafe { obf_validate(f) }, ObfStatus::Ok);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { obf_foliation_to_json(f, &mut out) }, ObfStatus::Ok);
    assert_eq!(take(out), doc);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { obf_census_json(f, &mut out) }, ObfStatus::Ok);
    let census: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(census["e"], 0);
    unsafe { obf_foliation_free(f) };
}

#[test]
fn grown_spheres_reduce_through_the_abi() {
    let grown = grow_sphere(4, &GrowConfig::default()).unwrap().surface;
    let (status, f) = load(&foliation_document(&grown).unwrap());
    assert_eq!(status, ObfStatus::Ok);
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { obf_reduce_json(f, ObfMode::Split, &mut out) },
        ObfStatus::Ok
    );
    let doc: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(doc["kind"], "trace");
    assert_eq!(
        doc["payload"]["trace"]["outcome"]["outcome"],
        "reduced_to_split"
    );
    unsafe { obf_foliation_free(f) };
}

#[test]
fn bad_input_sets_a_status_and_a_message() {
    let (status, f) = load("{\"kind\":\"movie\",\"version\":\"1\",\"payload\":{}}");
    assert_eq!(status, ObfStatus::Malformed);
    assert!(f.is_null());
    assert!(last_error().contains("document"), "{}", last_error());
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { obf_foliation_from_json(ptr::null(), &mut f) },
        ObfStatus::NullArgument
    );
    assert_eq!(
        unsafe { obf_validate(ptr::null()) },
        ObfStatus::NullArgument
    );
    unsafe {
        obf_foliation_free(ptr::null_mut());
        obf_string_free(ptr::null_mut());
    }
}
