//! Compiles a small C program against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "dieudonne.h"

int main(void) {
    DdTower *tw = NULL;
    if (dd_tower_new(3, 1, 2, 1, 8, &tw) != DD_STATUS_OK) return 1;
    DdModule *m = NULL;
    if (dd_module_slope(tw, 1, &m) != DD_STATUS_OK) return 2;
    uint32_t twice = 0;
    if (dd_module_newton_twice(m, DD_METHOD_ORACLE, &twice) != DD_STATUS_OK || twice != 2) return 3;
    char *json = NULL;
    if (dd_module_invariants(m, DD_METHOD_AUTO, &json) != DD_STATUS_OK) return 4;
    if (strstr(json, "\"a_number\":1") == NULL) return 5;
    dd_string_free(json);
    dd_module_free(m);
    dd_tower_free(tw);
    if (dd_tower_new(9, 1, 1, 1, 8, &tw) != DD_STATUS_NOT_PRIME) return 6;
    if (strlen(dd_last_error()) == 0) return 7;
    puts("ok");
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libdieudonne_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("abi_check.c");
    let bin = dir.join("abi_check");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
