use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use dcd_rtls::complexity::{predicted_ops, Algo};
use dcd_rtls::eiv::{gen_covariance, paper_system, EivModel, REFERENCE_COVARIANCE_SEED};
use dcd_rtls::theory::TheoryModel;
use dcd_rtls_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(dcd_rtls_last_error()) }.to_string_lossy().into_owned()
}

fn new_filter(cfg: &DcdRtlsConfig) -> *mut DcdRtlsFilter {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { dcd_rtls_filter_new(cfg, &mut f) }, DcdRtlsStatus::Ok, "{}", last_error());
    f
}

#[test]
fn handle_lifecycle_and_identification() {
    let cfg = DcdRtlsConfig { p_exponent: 7, ..dcd_rtls_config_default() };
    let f = new_filter(&cfg);
    let h = paper_system();
    let mut state = 1u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    for _ in 0..3000 {
        let x: Vec<f64> = (0..8).map(|_| 3.0 * next()).collect();
        let y: f64 = x.iter().zip(&h).map(|(a, b)| a * b).sum();
        assert_eq!(unsafe { dcd_rtls_filter_step(f, x.as_ptr(), x.len(), y) }, DcdRtlsStatus::Ok);
    }
    let mut w = [0.0; 8];
    assert_eq!(unsafe { dcd_rtls_filter_weights(f, w.as_mut_ptr(), 8) }, DcdRtlsStatus::Ok);
    let msd: f64 = w.iter().zip(&h).map(|(a, b)| (a - b).powi(2)).sum();
    assert!(msd < 1e-4, "{msd}");

    let mut c = DcdRtlsOpCounts::default();
    assert_eq!(unsafe { dcd_rtls_filter_last_counts(f, &mut c) }, DcdRtlsStatus::Ok);
    assert!(c.mul > 0 && c.add > 0 && c.div == 1);
    assert_eq!(unsafe { dcd_rtls_filter_order(f) }, 8);
    unsafe { dcd_rtls_filter_free(f) };
}

#[test]
fn errors_map_to_status_codes() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { dcd_rtls_filter_new(ptr::null(), &mut f) }, DcdRtlsStatus::NullPointer);
    assert!(last_error().contains("config"));

    let bad = DcdRtlsConfig { p_exponent: 0, ..dcd_rtls_config_default() };
    assert_eq!(unsafe { dcd_rtls_filter_new(&bad, &mut f) }, DcdRtlsStatus::Config);
    assert!(f.is_null());
    let bad = DcdRtlsConfig { dcd_m: 0, ..dcd_rtls_config_default() };
    assert_eq!(unsafe { dcd_rtls_filter_new(&bad, &mut f) }, DcdRtlsStatus::Config);

    let f = new_filter(&dcd_rtls_config_default());
    let x = [0.0; 5];
    assert_eq!(unsafe { dcd_rtls_filter_step(f, x.as_ptr(), 5, 0.0) }, DcdRtlsStatus::InvalidArgument);
    assert!(last_error().contains("length"), "{}", last_error());
    assert_eq!(unsafe { dcd_rtls_filter_step(f, ptr::null(), 8, 0.0) }, DcdRtlsStatus::NullPointer);
    let mut w = [0.0; 4];
    assert_eq!(unsafe { dcd_rtls_filter_weights(f, w.as_mut_ptr(), 4) }, DcdRtlsStatus::InvalidArgument);
    assert_eq!(unsafe { dcd_rtls_filter_last_counts(f, ptr::null_mut()) }, DcdRtlsStatus::NullPointer);
    unsafe { dcd_rtls_filter_free(f) };
    unsafe { dcd_rtls_filter_free(ptr::null_mut()) };
    assert_eq!(unsafe { dcd_rtls_filter_order(ptr::null()) }, 0);
}

#[test]
fn predicted_ops_match_the_core_model() {
    let pairs = [
        (DcdRtlsAlgo::DcdRtls, Algo::DcdRtls),
        (DcdRtlsAlgo::Aip, Algo::Aip),
        (DcdRtlsAlgo::XRtls, Algo::XRtls),
        (DcdRtlsAlgo::KRtls, Algo::KRtls),
    ];
    for (c, r) in pairs {
        for structured in [false, true] {
            let mut out = DcdRtlsOpCounts::default();
            assert_eq!(unsafe { dcd_rtls_predicted_ops(c, 16, 2, 12, structured, &mut out) }, DcdRtlsStatus::Ok);
            assert_eq!(out, predicted_ops(r, 16, 2, 12, structured).into());
        }
    }
}

#[test]
fn theory_matches_the_core_model() {
    let r = gen_covariance(8, REFERENCE_COVARIANCE_SEED).unwrap();
    let model = EivModel::from_synthesis(paper_system(), &r, 0.01, 0.01).unwrap();
    let rows: Vec<f64> = (0..8).flat_map(|i| (0..8).map(move |j| (i, j))).map(|(i, j)| model.r().get(i, j)).collect();
    let lambda = 1.0 - 2f64.powi(-10);
    let mut out = DcdRtlsTheory::default();
    let st = unsafe { dcd_rtls_theory(rows.as_ptr(), model.h().as_ptr(), 8, 0.01, 0.01, lambda, &mut out) };
    assert_eq!(st, DcdRtlsStatus::Ok, "{}", last_error());
    let t = TheoryModel::from_model(&model, lambda).unwrap();
    assert_eq!(out.steady_state_msd, t.steady_state_msd());
    assert_eq!(out.lambda_exact, t.stability_lambda_exact());
    assert_eq!(out.lambda_bound, t.stability_lambda_bound());
    assert!(out.lambda_exact < lambda && out.s_bar_spectral_radius < 1.0);

    let mut bad = rows.clone();
    bad[0] = -1.0;
    let st = unsafe { dcd_rtls_theory(bad.as_ptr(), model.h().as_ptr(), 8, 0.01, 0.01, lambda, &mut out) };
    assert_ne!(st, DcdRtlsStatus::Ok);
    let st = unsafe { dcd_rtls_theory(rows.as_ptr(), model.h().as_ptr(), 8, 0.01, 0.01, 1.5, &mut out) };
    assert_eq!(st, DcdRtlsStatus::Config);
}

#[test]
fn header_declares_the_abi() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/dcd_rtls.h")).unwrap();
    for sym in [
        "typedef struct DcdRtlsFilter DcdRtlsFilter;",
        "DCD_RTLS_STATUS_PANIC = 7",
        "DcdRtlsConfig dcd_rtls_config_default(void);",
        "dcd_rtls_filter_new(const DcdRtlsConfig *config",
        "void dcd_rtls_filter_free(DcdRtlsFilter *filter);",
        "dcd_rtls_filter_step(",
        "dcd_rtls_filter_weights(",
        "dcd_rtls_filter_last_counts(",
        "dcd_rtls_predicted_ops(",
        "dcd_rtls_theory(",
        "const char *dcd_rtls_last_error(void);",
    ] {
        assert!(header.contains(sym), "missing {sym}");
    }
}

fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib = artifact_dir().join("libdcd_rtls_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = Path::new(env!("CARGO_TARGET_TMPDIR")).join("ffi_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok"));
}
