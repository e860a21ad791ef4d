use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use templater_ffi::*;

fn fixture(name: &str) -> CString {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name);
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

fn parse(name: &str) -> *mut TemplaterTopology {
    let mut t = ptr::null_mut();
    let status = unsafe { templater_topology_parse(fixture(name).as_ptr(), &mut t) };
    assert_eq!(status, TemplaterStatus::Ok);
    t
}

fn output(run: *const TemplaterResult, which: TemplaterOutput) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { templater_result_output(run, which, &mut s) },
        TemplaterStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { templater_string_free(s) };
    text
}

#[test]
fn chain_growth_through_handles() {
    let r1 = parse("chain_butene1.data");
    let r2 = parse("chain_butene2.data");
    let p = parse("chain_octane.data");
    let reactants = [r1 as *const _, r2 as *const _];
    let products = [p as *const _];
    let config = templater_config_default();
    let mut run = ptr::null_mut();
    let status = unsafe { templater_run(reactants.as_ptr(), 2, products.as_ptr(), 1, &config, &mut run) };
    assert_eq!(status, TemplaterStatus::Ok);

    let mut initiators = [0u64; 2];
    assert_eq!(
        unsafe { templater_result_initiators(run, initiators.as_mut_ptr()) },
        TemplaterStatus::Ok
    );
    assert!(initiators[0] < initiators[1]);

    let map = output(run, TemplaterOutput::MapFile);
    assert!(map.contains("InitiatorIDs"));
    assert!(output(run, TemplaterOutput::PreTemplate).contains("atoms"));
    let json: serde_json::Value = serde_json::from_str(&output(run, TemplaterOutput::ReportJson)).unwrap();
    assert_eq!(json["created"].as_array().unwrap().len(), 2);
    assert!(output(run, TemplaterOutput::DotMapped).starts_with("graph"));

    unsafe {
        templater_result_free(run);
        templater_topology_free(r1);
        templater_topology_free(r2);
        templater_topology_free(p);
    }
}

#[test]
fn errors_carry_status_and_message() {
    let bad = CString::new("not a data file").unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { templater_topology_parse(bad.as_ptr(), &mut t) },
        TemplaterStatus::Parse
    );
    assert!(t.is_null());
    assert!(!unsafe { CStr::from_ptr(templater_last_error_message()) }
        .to_bytes()
        .is_empty());

    let a = parse("chain_butene1.data");
    let list = [a as *const _];
    let mut run = ptr::null_mut();
    let status = unsafe { templater_run(list.as_ptr(), 1, list.as_ptr(), 1, ptr::null(), &mut run) };
    assert_eq!(status, TemplaterStatus::NoReactionDetected);
    assert!(run.is_null());

    let mut config = templater_config_default();
    config.cutoff = 0;
    let status = unsafe { templater_run(list.as_ptr(), 1, list.as_ptr(), 1, &config, &mut run) };
    assert_eq!(status, TemplaterStatus::Config);
    unsafe { templater_topology_free(a) };
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        templater_topology_free(ptr::null_mut());
        templater_result_free(ptr::null_mut());
        templater_string_free(ptr::null_mut());
        assert_eq!(templater_topology_atom_count(ptr::null()), 0);
        let list = [ptr::null()];
        let mut run = ptr::null_mut();
        assert_eq!(
            templater_run(list.as_ptr(), 1, list.as_ptr(), 1, ptr::null(), &mut run),
            TemplaterStatus::InvalidArgument
        );
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "templater.h"

int main(void) {
    TemplaterConfig c = templater_config_default();
    TemplaterTopology *t = NULL;
    TemplaterStatus s = templater_topology_parse("garbage", &t);
    if (s != TEMPLATER_STATUS_PARSE || t != NULL) return 1;
    if (templater_last_error_message() == NULL) return 2;
    printf("%u %.2f\n", c.cutoff, c.alpha);
    return 0;
}
"#;

/// Builds the static library and returns its path. The test harness only
/// compiles the rlib, so the archive has to be produced explicitly.
fn static_library() -> PathBuf {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR")).join("Cargo.toml");
    let target = Path::new(env!("CARGO_TARGET_TMPDIR")).join("c-link");
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let built = Command::new(cargo)
        .args(["build", "--quiet", "--lib", "--manifest-path"])
        .arg(&manifest)
        .arg("--target-dir")
        .arg(&target)
        .status()
        .unwrap();
    assert!(built.success());
    target.join("debug").join("libtemplater_ffi.a")
}

#[test]
fn header_compiles_and_links_from_c() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let lib = static_library();
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let compiled = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler on PATH");
    assert!(compiled.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "4 0.50\n");
}
