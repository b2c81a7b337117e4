use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use sturmian_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = stm_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

unsafe fn take(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    stm_string_free(p);
    s
}

#[test]
fn fibonacci_mismatch_fixture() {
    unsafe {
        let mut w = ptr::null_mut();
        assert_eq!(stm_fibonacci_word(40, &mut w), StmStatus::Ok);
        assert_eq!(stm_word_len(w), 40);
        let mut buf = [0usize; 6];
        let mut n = 0usize;
        assert_eq!(stm_mismatch_set(w, 5, 34, buf.as_mut_ptr(), buf.len(), &mut n), StmStatus::Ok);
        assert_eq!(&buf[..n], &[6, 7, 19, 20, 27, 28]);

        let mut small = [0usize; 2];
        assert_eq!(stm_mismatch_set(w, 5, 34, small.as_mut_ptr(), small.len(), &mut n), StmStatus::BufferTooSmall);
        assert_eq!(n, 6);
        assert!(last_error().contains("6 needed"));

        let mut count = 0usize;
        assert_eq!(stm_subword_complexity(w, 7, &mut count), StmStatus::Ok);
        assert_eq!(count, 8);
        stm_word_free(w);
    }
}

#[test]
fn coding_matches_fibonacci_word() {
    unsafe {
        let theta = c("quad:(3-sqrt(5))/2");
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(stm_theta_coding(theta.as_ptr(), theta.as_ptr(), 1, 500, &mut a), StmStatus::Ok);
        assert_eq!(stm_fibonacci_word(500, &mut b), StmStatus::Ok);
        let (mut x, mut y) = (vec![9u8; 500], vec![7u8; 500]);
        assert_eq!(stm_word_symbols(a, x.as_mut_ptr(), 500), StmStatus::Ok);
        assert_eq!(stm_word_symbols(b, y.as_mut_ptr(), 500), StmStatus::Ok);
        assert_eq!(x, y);
        assert_eq!(stm_word_symbols(a, x.as_mut_ptr(), 10), StmStatus::BufferTooSmall);
        stm_word_free(a);
        stm_word_free(b);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut w = ptr::null_mut();
        let bad = c("quad:(3-sqrt(5)/2");
        let half = c("1/2");
        assert_eq!(stm_theta_coding(bad.as_ptr(), half.as_ptr(), 1, 10, &mut w), StmStatus::Parse);
        assert!(last_error().starts_with("ParseError"));
        assert!(w.is_null());
        assert_eq!(stm_theta_coding(half.as_ptr(), half.as_ptr(), 1, 10, &mut w), StmStatus::Validation);
        assert_eq!(stm_theta_coding(ptr::null(), half.as_ptr(), 1, 10, &mut w), StmStatus::NullPointer);
        assert_eq!(stm_fibonacci_word(3, ptr::null_mut()), StmStatus::NullPointer);
        assert_eq!(stm_word_len(ptr::null()), 0);

        let mut n = 0usize;
        assert_eq!(stm_fibonacci_word(10, &mut w), StmStatus::Ok);
        assert!(stm_last_error().is_null());
        assert_eq!(stm_mismatch_set(w, 5, 34, ptr::null_mut(), 0, &mut n), StmStatus::Words);
        stm_word_free(w);

        let invalid = [0xffu8, 0];
        let mut h = ptr::null_mut();
        assert_eq!(stm_rotation_new(invalid.as_ptr().cast(), half.as_ptr(), &mut h), StmStatus::InvalidUtf8);
        let quarter = c("1/4");
        assert_eq!(stm_rotation_new(half.as_ptr(), quarter.as_ptr(), &mut h), StmStatus::Validation);
    }
}

#[test]
fn rotation_handles() {
    unsafe {
        let (half, tq) = (c("1/2"), c("3/4"));
        let mut h = ptr::null_mut();
        assert_eq!(stm_rotation_new(half.as_ptr(), tq.as_ptr(), &mut h), StmStatus::Ok);
        let mut v = ptr::null_mut();
        let mut branch = 9u8;
        assert_eq!(stm_rotation_apply(h, tq.as_ptr(), &mut v, &mut branch), StmStatus::Ok);
        assert_eq!(take(v), "rat:1/8");
        assert_eq!(branch, 1);
        let mut j = ptr::null_mut();
        assert_eq!(stm_rotation_number(h, 1000, &mut j), StmStatus::Ok);
        let s = take(j);
        assert!(s.starts_with("{\"bits\":128,\"mid\":\"0.5005"), "{}", s);
        let one = c("1");
        assert_eq!(stm_rotation_apply(h, one.as_ptr(), &mut v, &mut branch), StmStatus::Validation);
        stm_rotation_free(h);

        let theta = c("quad:(3-sqrt(5))/2");
        assert_eq!(stm_rotation_with_rotation(half.as_ptr(), theta.as_ptr(), &mut h), StmStatus::Ok);
        assert_eq!(stm_rotation_number(h, 10_000, &mut j), StmStatus::Ok);
        let mid: f64 = take(j).split('"').nth(5).unwrap().parse().unwrap();
        assert!((mid - 0.381966).abs() < 2e-4);
        stm_rotation_free(h);
        stm_rotation_free(ptr::null_mut());
    }
}

#[test]
fn manifest_entry_point() {
    unsafe {
        let m = c(r#"{"command": "cf", "inputs": {"theta": "quad:(3-sqrt(5))/2", "n": 5, "positive_side": 4}}"#);
        let mut out = ptr::null_mut();
        assert_eq!(stm_run_manifest(m.as_ptr(), 0, &mut out), StmStatus::Ok);
        let s = take(out);
        assert!(s.contains("\"schema_version\": 1"));
        assert!(s.contains("\"positive_side\": [\n      \"1\",\n      \"3\",\n      \"8\",\n      \"21\"\n    ]"), "{}", s);
        let empty = c("");
        assert_eq!(stm_run_manifest(empty.as_ptr(), 0, &mut out), StmStatus::Validation);
        let unknown = c(r#"{"command": "export", "inputs": {"report": "/nonexistent.json", "kind": "x"}}"#);
        assert_eq!(stm_run_manifest(unknown.as_ptr(), 0, &mut out), StmStatus::Io);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(stm_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/sturmian.h")
}

#[test]
fn header_declares_the_interface() {
    let h = std::fs::read_to_string(header()).unwrap();
    for name in [
        "typedef struct StmWord StmWord;",
        "typedef struct StmRotation StmRotation;",
        "STM_STATUS_OK = 0",
        "STM_STATUS_NOT_ON_ATTRACTOR = 14",
        "StmStatus stm_fibonacci_word(size_t n, StmWord **out);",
        "void stm_word_free(StmWord *w);",
        "const char *stm_last_error(void);",
        "StmStatus stm_run_manifest(const char *manifest, uint32_t prec, char **out_json);",
    ] {
        assert!(h.contains(name), "missing {}", name);
    }
}

const C_SMOKE: &str = r#"
#include <stdio.h>
#include <string.h>
#include "sturmian.h"

int main(void) {
    StmWord *w = NULL;
    size_t buf[8], n = 0;
    if (stm_fibonacci_word(40, &w) != STM_STATUS_OK) return 1;
    if (stm_mismatch_set(w, 5, 34, buf, 8, &n) != STM_STATUS_OK || n != 6) return 2;
    if (buf[0] != 6 || buf[5] != 28) return 3;
    stm_word_free(w);
    StmRotation *r = NULL;
    if (stm_rotation_new("1/2", "1/4", &r) != STM_STATUS_VALIDATION) return 4;
    if (stm_last_error() == NULL) return 5;
    printf("%s\n", stm_version());
    return 0;
}
"#;

/// Compile and run a C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libsturmian_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = std::env::temp_dir().join(format!("stm_ffi_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    let bin = dir.join("smoke");
    std::fs::write(&src, C_SMOKE).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), env!("CARGO_PKG_VERSION"));
    std::fs::remove_dir_all(&dir).ok();
}
