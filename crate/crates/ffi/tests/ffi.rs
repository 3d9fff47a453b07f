use std::ffi::{CStr, CString};
use std::ptr;

use hodge_gauge::doc::{Document, MhsDoc};
use hodge_gauge::fixtures::{counterexamples, kummer_mhs};
use hodge_gauge_ffi::*;

fn kummer_json(c: &str) -> CString {
    let v = kummer_mhs(&c.parse().unwrap());
    CString::new(Document::Mhs(MhsDoc::from_mhs(None, &v)).to_json()).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    hg_string_free(s);
    out
}

fn last_error() -> Option<String> {
    let p = hg_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn handles_roundtrip_through_the_triangle() {
    unsafe {
        let json = kummer_json("2+i");
        let mut v = ptr::null_mut();
        assert_eq!(hg_mhs_from_json(json.as_ptr(), &mut v), HgStatus::HgOk);
        let mut n = 0usize;
        assert_eq!(hg_mhs_dim(v, &mut n), HgStatus::HgOk);
        assert_eq!(n, 2);
        let mut hodge = ptr::null_mut();
        assert_eq!(hg_mhs_validate(v, &mut hodge), HgStatus::HgOk);
        assert!(take(hodge).contains("\"p\":-1"));

        let mut d = ptr::null_mut();
        assert_eq!(hg_delta_from_mhs(v, &mut d), HgStatus::HgOk);
        let mut c = ptr::null_mut();
        assert_eq!(hg_connection_from_delta(d, &mut c), HgStatus::HgOk);
        let mut t = ptr::null_mut();
        assert_eq!(hg_connection_triangle_delta(c, &mut t), HgStatus::HgOk);
        let mut eq = 0;
        assert_eq!(hg_delta_equal(d, t, &mut eq), HgStatus::HgOk);
        assert_eq!(eq, 1);

        let mut s = ptr::null_mut();
        assert_eq!(hg_delta_to_json(t, &mut s), HgStatus::HgOk);
        let text = take(s);
        let back = CString::new(text).unwrap();
        let mut d2 = ptr::null_mut();
        assert_eq!(hg_delta_from_json(back.as_ptr(), &mut d2), HgStatus::HgOk);
        assert_eq!(hg_delta_equal(d, d2, &mut eq), HgStatus::HgOk);
        assert_eq!(eq, 1);

        assert_eq!(hg_connection_to_json(c, &mut s), HgStatus::HgOk);
        assert!(take(s).contains("\"kind\": \"connection\""));
        assert_eq!(hg_mhs_to_json(v, &mut s), HgStatus::HgOk);
        assert_eq!(CString::new(take(s)).unwrap(), json);

        hg_delta_free(d2);
        hg_delta_free(t);
        hg_connection_free(c);
        hg_delta_free(d);
        hg_mhs_free(v);
    }
}

#[test]
fn errors_are_codes_with_messages() {
    unsafe {
        let mut v = ptr::null_mut();
        let bad = CString::new("{\"kind\":\"mhs\"}").unwrap();
        assert_eq!(hg_mhs_from_json(bad.as_ptr(), &mut v), HgStatus::HgMalformed);
        assert!(v.is_null());
        assert!(last_error().unwrap().contains("parse"));

        assert_eq!(hg_mhs_from_json(ptr::null(), &mut v), HgStatus::HgNullPointer);
        assert_eq!(hg_mhs_dim(ptr::null(), ptr::null_mut()), HgStatus::HgNullPointer);

        let not_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(hg_mhs_from_json(not_utf8.as_ptr().cast(), &mut v), HgStatus::HgInvalidUtf8);

        // a triple that is not opposed parses but fails validation
        let nonhodge = CString::new(counterexamples().unwrap()[0].to_json()).unwrap();
        assert_eq!(hg_mhs_from_json(nonhodge.as_ptr(), &mut v), HgStatus::HgOk);
        let mut hodge = ptr::null_mut();
        assert_eq!(hg_mhs_validate(v, &mut hodge), HgStatus::HgViolation);
        assert!(hodge.is_null());
        assert!(last_error().unwrap().contains("opposedness"));
        let mut d = ptr::null_mut();
        assert_eq!(hg_delta_from_mhs(v, &mut d), HgStatus::HgViolation);
        hg_mhs_free(v);

        // success clears the slot
        assert_eq!(hg_mhs_from_json(kummer_json("1").as_ptr(), &mut v), HgStatus::HgOk);
        assert!(last_error().is_none());
        hg_mhs_free(v);
        hg_string_free(ptr::null_mut());
    }
}

#[test]
fn last_error_is_per_thread() {
    let bad = CString::new("nope").unwrap();
    let mut v = ptr::null_mut();
    assert_eq!(unsafe { hg_mhs_from_json(bad.as_ptr(), &mut v) }, HgStatus::HgMalformed);
    std::thread::spawn(|| assert!(last_error().is_none())).join().unwrap();
    assert!(last_error().is_some());
}

#[test]
fn run_reports_mirror_the_cli() {
    unsafe {
        let cmd = CString::new("roundtrip").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(hg_run(cmd.as_ptr(), kummer_json("3").as_ptr(), &mut out), HgStatus::HgOk);
        let report: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(report["status"], "pass");
        assert_eq!(report["result"]["delta"][0][1], "-3/1");

        let validate = CString::new("validate").unwrap();
        let nonhodge = CString::new(counterexamples().unwrap()[0].to_json()).unwrap();
        assert_eq!(hg_run(validate.as_ptr(), nonhodge.as_ptr(), &mut out), HgStatus::HgViolation);
        assert!(take(out).contains("\"violation\""));

        let junk = CString::new("[]").unwrap();
        assert_eq!(hg_run(validate.as_ptr(), junk.as_ptr(), &mut out), HgStatus::HgMalformed);
        hg_string_free(out);
    }
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(hg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_interface_and_compiles() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/hodge_gauge.h")).unwrap();
    let src = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    for line in src.lines() {
        if let Some(rest) = line.split("extern \"C\" fn ").nth(1) {
            let name = rest.split('(').next().unwrap();
            assert!(header.contains(&format!("{name}(")), "{name} missing from the header");
        }
    }
    for cc in ["cc", "clang", "gcc"] {
        let Ok(status) = std::process::Command::new(cc)
            .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
            .arg(dir.join("include/hodge_gauge.h"))
            .status()
        else {
            continue;
        };
        assert!(status.success(), "{cc} rejected the header");
        return;
    }
    eprintln!("no C compiler found; syntax check skipped");
}
