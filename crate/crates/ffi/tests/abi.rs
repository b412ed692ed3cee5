use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use tsk_ffi::*;

fn new_group(spec: &str) -> *mut TskGroup {
    let spec = CString::new(spec).unwrap();
    let mut g = ptr::null_mut();
    let s = unsafe { tsk_group_new(spec.as_ptr(), 512, 100_000, &mut g) };
    assert_eq!(s, TskStatus::Ok);
    assert!(!g.is_null());
    g
}

fn last_error() -> String {
    let p = tsk_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn widths_and_counts() {
    let g = new_group("SD:5");
    let (mut w, mut order, mut subs, mut classes) = (0, 0, 0, 0);
    unsafe {
        assert_eq!(tsk_width(g, &mut w), TskStatus::Ok);
        assert_eq!(tsk_group_order(g, &mut order), TskStatus::Ok);
        assert_eq!(tsk_group_subgroups(g, &mut subs, &mut classes), TskStatus::Ok);
        tsk_group_free(g);
    }
    assert_eq!((w, order), (8, 32));
    assert!(classes <= subs);

    let g = new_group("C:16");
    let mut count = 0;
    assert_eq!(unsafe { tsk_count_systems(g, 1000, &mut count) }, TskStatus::Ok);
    assert_eq!(count, 42);
    assert_eq!(unsafe { tsk_count_systems(g, 10, &mut count) }, TskStatus::Budget);
    unsafe { tsk_group_free(g) };
}

#[test]
fn complexity_exact_and_partial() {
    let g = new_group("D:9");
    let mut c = 0;
    assert_eq!(unsafe { tsk_complexity(g, 1_000_000, &mut c) }, TskStatus::Ok);
    assert_eq!(c, 4);
    assert_eq!(unsafe { tsk_complexity(g, 5, &mut c) }, TskStatus::Budget);
    assert!(c <= 4);
    assert!(last_error().contains("lower bound"));
    unsafe { tsk_group_free(g) };
}

#[test]
fn rainbow_bounds() {
    for (spec, expected) in [("D:27", 5), ("D:243", 8), ("SD:5", 10)] {
        let s = CString::new(spec).unwrap();
        let mut b = 0;
        assert_eq!(unsafe { tsk_rainbow_bound(s.as_ptr(), 512, 100_000, &mut b) }, TskStatus::Ok, "{spec}");
        assert_eq!(b, expected, "{spec}");
    }
    let s = CString::new("C:8").unwrap();
    let mut b = 0;
    assert_eq!(unsafe { tsk_rainbow_bound(s.as_ptr(), 512, 100_000, &mut b) }, TskStatus::Domain);
}

#[test]
fn errors_map_to_codes() {
    let mut g = ptr::null_mut();
    let bad = CString::new("D:").unwrap();
    assert_eq!(unsafe { tsk_group_new(bad.as_ptr(), 512, 1000, &mut g) }, TskStatus::Parse);
    assert!(g.is_null());
    assert!(last_error().contains("parse error"));

    let big = CString::new("C:1024").unwrap();
    assert_eq!(unsafe { tsk_group_new(big.as_ptr(), 512, 1000, &mut g) }, TskStatus::Capacity);
    let sd = CString::new("SD:3").unwrap();
    assert_eq!(unsafe { tsk_group_new(sd.as_ptr(), 512, 1000, &mut g) }, TskStatus::Domain);

    assert_eq!(unsafe { tsk_group_new(ptr::null(), 512, 1000, &mut g) }, TskStatus::NullPointer);
    let ok = CString::new("C:4").unwrap();
    assert_eq!(unsafe { tsk_group_new(ok.as_ptr(), 512, 1000, ptr::null_mut()) }, TskStatus::NullPointer);
    let mut w = 0;
    assert_eq!(unsafe { tsk_width(ptr::null(), &mut w) }, TskStatus::NullPointer);
    unsafe { tsk_group_free(ptr::null_mut()) };
}

#[test]
fn spec_round_trip() {
    let g = new_group("AGL:2:3");
    let mut buf = [0 as std::ffi::c_char; 4];
    let need = unsafe { tsk_group_spec(g, buf.as_mut_ptr(), buf.len()) };
    assert_eq!(need, 7);
    assert_eq!(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap(), "AGL");
    let mut buf = [0 as std::ffi::c_char; 16];
    unsafe { tsk_group_spec(g, buf.as_mut_ptr(), buf.len()) };
    assert_eq!(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap(), "AGL:2:3");
    unsafe { tsk_group_free(g) };
    let v = unsafe { CStr::from_ptr(tsk_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Compiles a small C program against the generated header and the static
/// library, then runs it.
#[test]
fn c_program_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = target.join("libtsk_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "tsk.h"
int main(void) {
    TskGroup *g = NULL;
    size_t w = 0, c = 0;
    if (tsk_group_new("Q:5", 512, 100000, &g) != TSK_STATUS_OK) return 1;
    if (tsk_width(g, &w) != TSK_STATUS_OK) return 2;
    if (tsk_complexity(g, 1000000, &c) != TSK_STATUS_OK) return 3;
    tsk_group_free(g);
    if (tsk_group_new("X:1", 512, 100000, &g) != TSK_STATUS_PARSE) return 4;
    printf("%zu %zu %s\n", w, c, tsk_last_error() ? "err" : "none");
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("cc runs");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut parts = text.split_whitespace();
    assert_eq!(parts.next(), Some("8"));
    assert!(parts.next().unwrap().parse::<usize>().unwrap() >= 8);
    assert_eq!(parts.next(), Some("err"));
}
