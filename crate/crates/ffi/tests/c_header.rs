//! Compiles and runs a small C program against the generated header and
//! the static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "techcx.h"

int main(void) {
    double x[4] = {0, 0, 7, 0};
    double g = -1;
    if (tcx_gini(x, 4, &g) != TCX_STATUS_OK || g != 0.75) return 1;
    size_t edges[6] = {0, 1, 1, 2, 0, 2};
    TcxGraph *graph = NULL;
    if (tcx_graph_from_edges(3, edges, 3, &graph) != TCX_STATUS_OK) return 2;
    double s = -1;
    /* A triangle is below the minimum component size. */
    if (tcx_structural_score(graph, 0, &s, NULL) != TCX_STATUS_UNDEFINED) return 3;
    printf("%s\n", tcx_last_error());
    tcx_graph_free(graph);
    return 0;
}
"#;

#[test]
fn header_compiles_and_links() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libtechcx_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let exe = dir.path().join("main");
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).contains("at least 5"));
}
