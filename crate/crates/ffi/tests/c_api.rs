use std::env;
use std::path::PathBuf;
use std::process::Command;

// Compiles tests/smoke.c against the generated header and the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // the test binary and the library artifacts share target/<profile>/deps
    let deps = env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = deps.join("libpalg_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());

    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("smoke");
    let cc = env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("run C compiler");
    assert!(status.success());

    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
