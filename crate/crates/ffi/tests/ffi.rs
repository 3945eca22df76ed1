use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use delcheck_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(del_last_error()) }.to_string_lossy().into_owned()
}

fn build(spec: &str, n: u32, inputs: Option<&[i64]>) -> *mut DelModel {
    let mut out = ptr::null_mut();
    let (p, len) = inputs.map_or((ptr::null(), 0), |v| (v.as_ptr(), v.len()));
    let status = unsafe { del_model_build(c(spec).as_ptr(), n, p, len, 0, &mut out) };
    assert_eq!(status, DelStatus::Ok, "{spec}: {}", last_error());
    out
}

fn formula(text: &str) -> *mut DelFormula {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { del_formula_parse(c(text).as_ptr(), &mut out) }, DelStatus::Ok);
    out
}

#[test]
fn model_handles() {
    let bc = build("I[bc]", 1, Some(&[0, 1]));
    let sa = build("sa:1", 2, None);
    unsafe {
        assert_eq!(del_model_facet_count(bc), 6);
        assert_eq!(del_model_dim(bc), 1);
        assert_eq!(del_model_facet_count(sa), 57);
        assert_eq!(del_model_facet_count(ptr::null()), 0);

        let mut json = ptr::null_mut();
        assert_eq!(del_model_to_json(bc, &mut json), DelStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(del_model_from_json(json, &mut back), DelStatus::Ok);
        assert_eq!(del_model_facet_count(back), 6);
        del_string_free(json);
        del_model_free(back);
        del_model_free(bc);
        del_model_free(sa);
        del_model_free(ptr::null_mut());
    }
}

#[test]
fn check_and_satisfies() {
    let m = build("initial", 1, Some(&[0, 1]));
    let t = formula("input(0,0) | input(0,1)");
    let f = formula("input(0,0)");
    unsafe {
        assert_eq!(del_check(m, t, ptr::null_mut()), DelStatus::Ok);
        let mut x = u32::MAX;
        assert_eq!(del_check(m, f, &mut x), DelStatus::No);
        assert_eq!(del_satisfies(m, x, f), DelStatus::No);
        assert_eq!(del_satisfies(m, 99, f), DelStatus::Model);
        let k = formula("K[3] false");
        assert_eq!(del_check(m, k, ptr::null_mut()), DelStatus::AgentOutOfRange);
        assert!(last_error().contains("agent 3"));
        for h in [t, f, k] {
            del_formula_free(h);
        }
        del_model_free(m);
    }
}

#[test]
fn obstruction_and_solve() {
    let is = build("is", 1, Some(&[0, 1]));
    let bc = build("bc", 1, Some(&[0, 1]));
    let own = build("sa-trivial", 1, Some(&[0, 1]));
    let mut psi = ptr::null_mut();
    unsafe {
        assert_eq!(del_formula_generate(c("bc").as_ptr(), 1, ptr::null(), &mut psi), DelStatus::Ok);
        assert_eq!(del_formula_is_positive(psi), 1);
        assert_eq!(del_verify_obstruction(bc, is, psi), DelStatus::Ok);
        assert_eq!(del_verify_obstruction(bc, bc, psi), DelStatus::No);
        let mut explored = 0;
        assert_eq!(del_solve(is, bc, 1_000_000, &mut explored), DelStatus::No);
        assert_eq!(del_solve(is, own, 1_000_000, ptr::null_mut()), DelStatus::Ok);
        assert_eq!(del_solve(is, own, 0, ptr::null_mut()), DelStatus::Budget);
        del_formula_free(psi);
        for m in [is, bc, own] {
            del_model_free(m);
        }
    }
}

#[test]
fn generators() {
    let adv = c(r#"{"n": 2, "survivor_sets": [[0,1],[1,2],[0,2]]}"#);
    let mut phi = ptr::null_mut();
    unsafe {
        assert_eq!(del_formula_generate(c("adversary").as_ptr(), 2, adv.as_ptr(), &mut phi), DelStatus::Ok);
        let task = build("sa:1", 2, None);
        let mut protocol = ptr::null_mut();
        let mut json = ptr::null_mut();
        let r = build("I[round:waitfree]", 2, None);
        assert_eq!(del_verify_obstruction(task, r, phi), DelStatus::Ok);
        del_model_to_json(r, &mut json);
        assert_eq!(del_model_from_json(json, &mut protocol), DelStatus::Ok);
        del_string_free(json);
        del_formula_free(phi);

        let mut nishida = ptr::null_mut();
        assert_eq!(del_formula_generate(c("nishida:2").as_ptr(), 2, ptr::null(), &mut nishida), DelStatus::Ok);
        assert_eq!(del_verify_obstruction(task, protocol, nishida), DelStatus::Ok);
        del_formula_free(nishida);
        let mut bad = ptr::null_mut();
        assert_eq!(del_formula_generate(c("nishida:9").as_ptr(), 2, ptr::null(), &mut bad), DelStatus::Spec);
        assert_eq!(del_formula_generate(c("what").as_ptr(), 2, ptr::null(), &mut bad), DelStatus::Spec);
        assert!(bad.is_null());
        for m in [task, protocol, r] {
            del_model_free(m);
        }
    }
}

#[test]
fn argument_errors() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(del_model_build(ptr::null(), 1, ptr::null(), 0, 0, &mut out), DelStatus::NullArgument);
        assert_eq!(del_model_build(c("is").as_ptr(), 1, ptr::null(), 0, 0, ptr::null_mut()), DelStatus::NullArgument);
        let bad_utf8 = [0xffu8, 0];
        assert_eq!(del_formula_parse(bad_utf8.as_ptr().cast(), &mut ptr::null_mut()), DelStatus::InvalidUtf8);
        assert_eq!(del_formula_parse(c("K[0").as_ptr(), &mut ptr::null_mut()), DelStatus::Parse);
        assert_eq!(del_model_from_json(c("{").as_ptr(), &mut out), DelStatus::Json);
        assert_eq!(del_check(ptr::null(), ptr::null(), ptr::null_mut()), DelStatus::NullArgument);
    }
}

#[test]
fn header_is_generated() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/delcheck.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in ["del_model_build", "del_check", "del_verify_obstruction", "del_solve", "DEL_STATUS_LIMIT = 3"] {
        assert!(text.contains(name), "{name}");
    }
}

/// Compiles and runs a C program against the header and the shared
/// library when a C compiler is on the path.
#[test]
fn c_program_links() {
    let Ok(cc) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(cc.status.success());
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    if !lib_dir.join("libdelcheck_ffi.so").exists() {
        eprintln!("shared library not built; skipping");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg("-L")
        .arg(&lib_dir)
        .arg("-ldelcheck_ffi")
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).env("LD_LIBRARY_PATH", &lib_dir).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "!(input(0,0) & input(1,0)) | C[{0,1}] (input(0,0) | input(1,0))\n"
    );
}
