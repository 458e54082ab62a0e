use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use qhcat_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    qhcat_string_free(s);
    out
}

fn last_error() -> String {
    let p = qhcat_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn family_round_trip() {
    unsafe {
        let mut cat = ptr::null_mut();
        let name = c("za-inf-inf");
        let status = qhcat_category_family(name.as_ptr(), ptr::null(), 3, ptr::null(), &mut cat);
        assert_eq!(status, QhcatStatus::Ok);
        assert_eq!(qhcat_category_object_count(cat), 13);
        assert_eq!(qhcat_category_layer_count(cat), 3);
        let mut x = usize::MAX;
        let label = c("E1_1");
        assert_eq!(
            qhcat_category_find(cat, label.as_ptr(), &mut x),
            QhcatStatus::Ok
        );
        assert_eq!(take(qhcat_category_object_name(cat, x)), "(9,3)");
        assert!(qhcat_category_object_name(cat, 99).is_null());
        let mut d = 0;
        assert_eq!(qhcat_hom_dim(cat, x, x, &mut d), QhcatStatus::Ok);
        assert_eq!(d, 1);
        assert_eq!(qhcat_hom_dim(cat, x, 99, &mut d), QhcatStatus::OutOfRange);

        let mut cert = ptr::null_mut();
        assert_eq!(qhcat_check_qh(cat, &mut cert), QhcatStatus::Ok);
        assert_eq!(qhcat_certificate_passed(cert), 1);
        assert!(take(qhcat_certificate_report(cert)).starts_with("[PASS] qh-chain"));
        let json: serde_json::Value =
            serde_json::from_str(&take(qhcat_certificate_json(cert))).unwrap();
        assert_eq!(json["passed"], true);
        qhcat_certificate_free(cert);
        qhcat_category_free(cat);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut cat = ptr::null_mut();
        let bad = c("nope");
        let status = qhcat_category_family(bad.as_ptr(), ptr::null(), 3, ptr::null(), &mut cat);
        assert_eq!(status, QhcatStatus::Invalid);
        assert!(last_error().contains("nope"));
        assert!(cat.is_null());

        let spec = c(r#"{"family": {"name": "za-inf", "extra": 1}}"#);
        assert_eq!(
            qhcat_category_from_spec(spec.as_ptr(), &mut cat),
            QhcatStatus::Invalid
        );
        assert!(last_error().contains("unknown field"));

        assert_eq!(
            qhcat_category_from_spec(ptr::null(), &mut cat),
            QhcatStatus::NullPointer
        );
        let mut x = 0;
        assert_eq!(
            qhcat_category_find(ptr::null(), bad.as_ptr(), &mut x),
            QhcatStatus::NullPointer
        );
        assert_eq!(qhcat_category_object_count(ptr::null()), 0);
        assert_eq!(qhcat_certificate_passed(ptr::null()), 0);
        qhcat_category_free(ptr::null_mut());
        qhcat_certificate_free(ptr::null_mut());
        qhcat_string_free(ptr::null_mut());
    }
}

#[test]
fn unknown_object() {
    unsafe {
        let spec = c(r#"{"quiver": {"vertices": ["a", "b"],
                                    "arrows": [{"name": "f", "from": "a", "to": "b"}]},
                        "layers": [["b"], ["a"]]}"#);
        let mut cat = ptr::null_mut();
        assert_eq!(
            qhcat_category_from_spec(spec.as_ptr(), &mut cat),
            QhcatStatus::Ok
        );
        let mut x = 0;
        let z = c("z");
        assert_eq!(
            qhcat_category_find(cat, z.as_ptr(), &mut x),
            QhcatStatus::UnknownObject
        );
        let mut cert = ptr::null_mut();
        assert_eq!(qhcat_check_qh(cat, &mut cert), QhcatStatus::Ok);
        assert_eq!(qhcat_certificate_passed(cert), 1);
        qhcat_certificate_free(cert);
        qhcat_category_free(cat);
    }
}

#[test]
fn command_line_through_ffi() {
    let args = [
        c("qhcat"),
        c("tensor"),
        c("--left"),
        c("a2"),
        c("--right"),
        c("a2"),
    ];
    let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    unsafe {
        let mut out = ptr::null_mut();
        let code = qhcat_run(argv.len(), argv.as_ptr(), &mut out, ptr::null_mut());
        assert_eq!(code, 0);
        assert!(take(out).starts_with("qhcat tensor : PASS"));
        let mut err = ptr::null_mut();
        let code = qhcat_run(
            2,
            [args[0].as_ptr(), c("bogus").as_ptr()].as_ptr(),
            ptr::null_mut(),
            &mut err,
        );
        assert_eq!(code, 2);
        assert!(!take(err).is_empty());
    }
}

#[test]
fn header_declares_the_interface() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/qhcat.h")).unwrap();
    for name in [
        "qhcat_category_from_spec",
        "qhcat_category_family",
        "qhcat_check_qh",
        "qhcat_run",
        "qhcat_last_error",
        "QHCAT_STATUS_WINDOW_TOO_SMALL",
        "typedef struct QhcatCategory QhcatCategory",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

/// Compiles the C smoke test against the header and the static library when a C compiler is
/// available.
#[test]
fn c_program_links_against_the_static_library() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = target.join("libqhcat_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("qhcat_smoke");
    let status = Command::new(&cc)
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "objects 13 layers 3 passed 1\n"
    );
}
