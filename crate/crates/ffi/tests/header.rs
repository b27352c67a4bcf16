use std::path::PathBuf;
use std::process::Command;

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/ravg.h")
}

#[test]
fn header_declares_the_interface() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "RAVG_H",
        "RAVG_STATUS_OK",
        "typedef struct RavgField RavgField",
        "typedef struct RavgGrid RavgGrid",
        "ravg_constants",
        "ravg_grid_materialize",
        "ravg_last_error",
        "ravg_run_config",
    ] {
        assert!(text.contains(name), "missing `{name}`");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(out) = Command::new("cc")
        .args(["-std=c99", "-fsyntax-only", "-x", "c"])
        .arg(header())
        .output()
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
