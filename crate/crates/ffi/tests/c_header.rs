//! Compiles a small C program against the generated header and the static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "bincover.h"

int main(void) {
    BcSequence *seq = NULL;
    if (bc_sequence_parse("0.5\n0.5\n0.7\n0.3\n", &seq) != BC_STATUS_OK) return 10;
    size_t covered = 0, opt = 0, m = 0, oc = 0;
    int64_t num = 0, den = 0;
    if (bc_run(seq, BC_STRATEGY_DNF, 0, 0, 0, 1, &covered) != BC_STATUS_OK) return 11;
    if (bc_opt_exact(seq, 15, &opt) != BC_STATUS_OK) return 12;
    if (bc_oracle(seq, 3, &m, &num, &den, &oc) != BC_STATUS_OK) return 13;
    char *tape = NULL;
    if (bc_advice_encode(2, 4, 5, &tape) != BC_STATUS_OK) return 14;
    printf("%zu %zu %s\n", covered, opt, tape);
    bc_string_free(tape);
    bc_sequence_free(seq);
    BcSequence *bad = NULL;
    if (bc_sequence_parse("x\n", &bad) != BC_STATUS_PARSE) return 15;
    if (strstr(bc_last_error(), "line 1") == NULL) return 16;
    return 0;
}
"#;

/// Builds the static library in a target directory of its own; the outer `cargo test` only
/// produces the rlib.
fn static_library() -> PathBuf {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let target = manifest.join("../../target/c-smoke");
    let status = Command::new(env!("CARGO"))
        .args([
            "build",
            "--quiet",
            "--offline",
            "-p",
            "bincover-ffi",
            "--lib",
            "--target-dir",
        ])
        .arg(&target)
        .current_dir(manifest)
        .status()
        .expect("cargo runs");
    assert!(status.success(), "building the static library failed");
    target.join("debug/libbincover_ffi.a")
}

#[test]
fn c_program_links_against_static_library() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/bincover.h");
    assert!(header.exists(), "header not generated");
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let lib = static_library();
    let dir = tempfile_dir();
    let src = dir.join("smoke.c");
    let exe = dir.join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "2 2 11010101101110011011101\n"
    );
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bincover-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn header_declares_the_api() {
    let header =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/bincover.h"))
            .unwrap();
    for name in [
        "bc_sequence_parse",
        "bc_sequence_free",
        "bc_sequence_len",
        "bc_run",
        "bc_oracle",
        "bc_opt_exact",
        "bc_advice_encode",
        "bc_advice_decode",
        "bc_string_free",
        "bc_last_error",
        "typedef struct BcSequence BcSequence",
        "BC_STATUS_LIMIT_EXCEEDED = 6",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
