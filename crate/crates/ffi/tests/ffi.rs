use std::ffi::{c_char, CStr};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use fracbranch_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let needed = unsafe { fb_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(needed > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn scalar_functions() {
    let mut v = 0.0;
    assert_eq!(
        unsafe { fb_mittag_leffler(0.5, -1.0, &mut v) },
        FbStatus::Ok
    );
    assert!((v - 0.427_583_576_155_807).abs() < 1e-14);
    assert_eq!(unsafe { fb_gamma(5.0, &mut v) }, FbStatus::Ok);
    assert_eq!(v, 24.0);
    let version = unsafe { CStr::from_ptr(fb_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn errors_carry_status_and_message() {
    fb_clear_last_error();
    assert_eq!(unsafe { fb_last_error_message(ptr::null_mut(), 0) }, 0);
    let mut v = 0.0;
    assert_eq!(
        unsafe { fb_mittag_leffler(1.5, 1.0, &mut v) },
        FbStatus::Domain
    );
    assert!(last_error().contains("beta"), "{}", last_error());
    assert_eq!(
        unsafe { fb_gamma(1.0, ptr::null_mut()) },
        FbStatus::NullPointer
    );
    assert!(last_error().contains("out"));

    // truncation keeps the terminator
    let mut tiny = [1 as c_char; 4];
    let needed = unsafe { fb_last_error_message(tiny.as_mut_ptr(), tiny.len()) };
    assert!(needed > 4);
    assert_eq!(tiny[3], 0);
}

#[test]
fn handles_round_trip() {
    let mut rng = ptr::null_mut();
    let mut law = ptr::null_mut();
    let pmf = [0.25, 0.25, 0.5];
    unsafe {
        assert_eq!(fb_rng_new(42, 0, &mut rng), FbStatus::Ok);
        assert_eq!(
            fb_offspring_law_new(pmf.as_ptr(), pmf.len(), &mut law),
            FbStatus::Ok
        );
        let mut m = 0.0;
        assert_eq!(fb_offspring_law_mean(law, &mut m), FbStatus::Ok);
        assert_eq!(m, 1.25);
        let mut z = 0u64;
        assert_eq!(fb_gw_final(rng, law, 3, 4, &mut z), FbStatus::Ok);
        let mut e = -1.0;
        assert_eq!(
            fb_sample_inverse_marginal(rng, 0.7, 1.0, &mut e),
            FbStatus::Ok
        );
        assert!(e > 0.0);
        assert_eq!(
            fb_sample_one_sided_stable(rng, 1.2, &mut e),
            FbStatus::Domain
        );
        assert_eq!(
            fb_gw_final(ptr::null_mut(), law, 1, 1, &mut z),
            FbStatus::NullPointer
        );
        fb_offspring_law_free(law);
        fb_rng_free(rng);
        fb_rng_free(ptr::null_mut());
    }
}

#[test]
fn identical_seeds_replay() {
    let draw = || unsafe {
        let mut rng = ptr::null_mut();
        fb_rng_new(7, 3, &mut rng);
        let mut xs = [0.0; 4];
        for x in &mut xs {
            fb_sample_inverse_marginal(rng, 0.6, 2.0, x);
        }
        fb_rng_free(rng);
        xs
    };
    assert_eq!(draw(), draw());
}

#[test]
fn mechanism_moments_and_exponent() {
    unsafe {
        let mut mech = ptr::null_mut();
        assert_eq!(
            fb_mechanism_new(0.0, 0.5, ptr::null(), ptr::null(), 0, &mut mech),
            FbStatus::Ok
        );
        let mut m2 = 0.0;
        assert_eq!(
            fb_tc_second_moment(mech, 1.0, 1.0, 0.7, &mut m2),
            FbStatus::Ok
        );
        assert!((m2 - 2.100_547_405_523_665_7).abs() < 1e-12);
        fb_mechanism_free(mech);

        assert_eq!(
            fb_mechanism_new(1.0, 1.0, ptr::null(), ptr::null(), 0, &mut mech),
            FbStatus::Ok
        );
        let grid = [0.0, 0.5, 1.0];
        let mut nu = [0.0; 3];
        assert_eq!(
            fb_solve_exponent(mech, 2.0, grid.as_ptr(), 3, nu.as_mut_ptr()),
            FbStatus::Ok
        );
        assert_eq!(nu[0], 2.0);
        assert!((nu[2] - 0.324_947_231_372_689_9).abs() < 1e-8);
        let bad = [1.0, 0.5];
        assert_eq!(
            fb_solve_exponent(mech, 2.0, bad.as_ptr(), 2, nu.as_mut_ptr()),
            FbStatus::Precondition
        );
        fb_mechanism_free(mech);

        let sizes = [1.0];
        let weights = [-1.0];
        assert_eq!(
            fb_mechanism_new(0.0, 0.0, sizes.as_ptr(), weights.as_ptr(), 1, &mut mech),
            FbStatus::Domain
        );
    }
}

#[test]
fn yule_pmf_fills_buffer() {
    let mut p = [0.0; 3];
    assert_eq!(
        unsafe { fb_yule_pmf(1.0, 1.0, 1.0, p.as_mut_ptr(), 3) },
        FbStatus::Ok
    );
    assert!((p[2] - 0.146_995_943_066_080_88).abs() < 1e-15);
}

fn target_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let lib = target_dir().join("libfracbranch_ffi.a");
    let header_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    assert!(header_dir.join("fracbranch.h").exists());
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping C link check: no static library or C compiler");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <math.h>
#include <stdio.h>
#include "fracbranch.h"

int main(void) {
    double v = 0.0;
    if (fb_mittag_leffler(0.5, -1.0, &v) != FB_STATUS_OK) return 1;
    if (fabs(v - 0.42758357615580700) > 1e-14) return 2;
    if (fb_mittag_leffler(2.0, 1.0, &v) != FB_STATUS_DOMAIN) return 3;
    char msg[128];
    if (fb_last_error_message(msg, sizeof msg) == 0) return 4;
    FbRng *rng = NULL;
    if (fb_rng_new(42, 0, &rng) != FB_STATUS_OK) return 5;
    if (fb_sample_inverse_marginal(rng, 0.6, 1.0, &v) != FB_STATUS_OK || !(v > 0.0)) return 6;
    fb_rng_free(rng);
    printf("ok %s\n", fb_version());
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&header_dir)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile/link failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "C smoke test exited with {:?}",
        out.status.code()
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
