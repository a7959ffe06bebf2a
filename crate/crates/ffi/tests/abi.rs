use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use unbox_ffi::*;

fn last_error() -> Option<String> {
    let p = unbox_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn bundled() -> *mut UnboxLexicon {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { unbox_lexicon_bundled(&mut h) }, UnboxStatus::Ok);
    assert!(!h.is_null());
    h
}

#[test]
fn scores_match_the_core_library() {
    let h = bundled();
    let analyzer = unbox_core::sentiment::Analyzer::default();
    for text in ["I love this phone :)", "Battery life is NOT good!!!", "", "meh", "😍 camera"] {
        let c = CString::new(text).unwrap();
        let mut s = UnboxScores::default();
        assert_eq!(unsafe { unbox_score(h, c.as_ptr(), &mut s) }, UnboxStatus::Ok);
        let want = analyzer.score(text);
        assert_eq!((s.pos, s.neu, s.neg, s.compound), (want.pos, want.neu, want.neg, want.compound));
    }
    assert!(last_error().is_none());
    unsafe { unbox_lexicon_free(h) };
}

#[test]
fn null_and_bad_utf8_are_reported() {
    let h = bundled();
    let mut s = UnboxScores::default();
    assert_eq!(unsafe { unbox_score(ptr::null(), c"x".as_ptr(), &mut s) }, UnboxStatus::NullPointer);
    assert!(last_error().unwrap().contains("handle"));
    assert_eq!(unsafe { unbox_score(h, c"x".as_ptr(), ptr::null_mut()) }, UnboxStatus::NullPointer);

    let bad = [0xffu8, 0xfe, 0];
    assert_eq!(unsafe { unbox_score(h, bad.as_ptr().cast(), &mut s) }, UnboxStatus::InvalidUtf8);
    assert!(last_error().unwrap().contains("UTF-8"));

    // a successful call clears the message
    assert_eq!(unsafe { unbox_score(h, c"fine".as_ptr(), &mut s) }, UnboxStatus::Ok);
    assert!(last_error().is_none());
    unsafe {
        unbox_lexicon_free(h);
        unbox_lexicon_free(ptr::null_mut());
    }
    assert_eq!(unsafe { unbox_lexicon_len(ptr::null()) }, 0);
}

#[test]
fn custom_lexicon_loads_and_errors_are_coded() {
    let lex = b"superb\t3.0\t0.5\t[3, 3]\nawful\t-3.0\t0.5\t[-3, -3]\n";
    let mut h = ptr::null_mut();
    let status = unsafe { unbox_lexicon_load(lex.as_ptr(), lex.len(), ptr::null(), 0, &mut h) };
    assert_eq!(status, UnboxStatus::Ok);
    assert_eq!(unsafe { unbox_lexicon_len(h) }, 2);
    let mut s = UnboxScores::default();
    unsafe { unbox_score(h, c"superb".as_ptr(), &mut s) };
    assert!(s.compound > 0.0);
    unsafe { unbox_score(h, c"great".as_ptr(), &mut s) };
    assert_eq!(s.compound, 0.0);
    unsafe { unbox_lexicon_free(h) };

    let broken = b"no-tab-here\n";
    let mut h = ptr::null_mut();
    let status = unsafe { unbox_lexicon_load(broken.as_ptr(), broken.len(), ptr::null(), 0, &mut h) };
    assert_eq!(status, UnboxStatus::Lexicon);
    assert!(h.is_null());
    assert!(last_error().unwrap().contains("line 1"));
}

#[test]
fn labels_reports_and_splits() {
    let mut label = UnboxLabel::Neutral;
    for (c, want) in [(0.5, UnboxLabel::Positive), (-0.5, UnboxLabel::Negative), (0.49, UnboxLabel::Neutral)] {
        assert_eq!(unsafe { unbox_label(c, 0.5, &mut label) }, UnboxStatus::Ok);
        assert_eq!(label, want);
    }
    assert_eq!(unsafe { unbox_label(0.1, 0.0, &mut label) }, UnboxStatus::InvalidArgument);
    assert_eq!(unsafe { unbox_label(f64::NAN, 0.5, &mut label) }, UnboxStatus::InvalidArgument);

    let mut r = UnboxReport::default();
    assert_eq!(unsafe { unbox_report_from_confusion(63, 236, 23, 859, &mut r) }, UnboxStatus::Ok);
    assert!((r.macro_precision - 0.76).abs() < 0.005);
    assert!((r.macro_recall - 0.59).abs() < 0.005);
    assert_eq!(unsafe { unbox_report_from_confusion(0, 0, 0, 0, &mut r) }, UnboxStatus::InvalidArgument);

    let (mut train, mut test) = (0usize, 0usize);
    for (n, want) in [(5904, 1181), (6059, 1212), (5370, 1074)] {
        assert_eq!(unsafe { unbox_split_sizes(n, 0.8, &mut train, &mut test) }, UnboxStatus::Ok);
        assert_eq!((train + test, test), (n, want));
    }
    assert_eq!(unsafe { unbox_split_sizes(10, 1.0, &mut train, &mut test) }, UnboxStatus::InvalidArgument);
}

#[test]
fn cleaning_predicates() {
    let mut numeric = false;
    assert_eq!(unsafe { unbox_is_numeric_only(c"12:45".as_ptr(), &mut numeric) }, UnboxStatus::Ok);
    assert!(numeric);
    unsafe { unbox_is_numeric_only(c"12 pro".as_ptr(), &mut numeric) };
    assert!(!numeric);
    let mut ratio = 0.0;
    assert_eq!(unsafe { unbox_caps_ratio(c"ABcd 12".as_ptr(), &mut ratio) }, UnboxStatus::Ok);
    assert_eq!(ratio, 0.5);
    let version = unsafe { CStr::from_ptr(unbox_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn target_dir() -> PathBuf {
    // .../target/<profile>/deps/abi-<hash>
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_header() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = crate_dir.join("include/unbox.h");
    assert!(header.exists(), "header not generated");
    let staticlib = target_dir().join("libunbox_ffi.a");
    if !staticlib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library at {}", staticlib.display());
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let compile = Command::new("cc")
        .args(["-std=c11", "-Wall", "-Werror", "-I"])
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg(&staticlib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(compile.status.success(), "{}", String::from_utf8_lossy(&compile.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
