//! C ABI for `fracbranch`.
//!
//! Every fallible function returns an [`FbStatus`] and writes its result
//! through an out-pointer. On failure a message is kept per thread and can be
//! read with [`fb_last_error_message`]. Stateful objects are opaque handles
//! created by `*_new` and released by the matching `*_free`; a handle must
//! not be used from two threads at once.
//!
//! The header `include/fracbranch.h` is generated by the build script.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fracbranch::csbp::{self, BranchingMechanism};
use fracbranch::gw::{self, OffspringLaw};
use fracbranch::random;
use fracbranch::special_fn;
use fracbranch::{Error, RngStream};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbStatus {
    Ok = 0,
    /// A parameter is outside its mathematical domain.
    Domain = 1,
    /// A structural precondition failed (grid shape, replicate count).
    Precondition = 2,
    /// Malformed input data.
    Input = 3,
    /// A path did not reach the requested time.
    Censored = 4,
    /// A numerical routine failed to converge.
    Numerical = 5,
    /// Cancellation exceeded what double precision can resolve.
    Accuracy = 6,
    /// A size or work limit was exceeded.
    Resource = 7,
    /// A required pointer was null.
    NullPointer = 8,
    /// An internal panic was caught at the boundary.
    Panic = 9,
}

/// Random stream handle.
pub struct FbRng(RngStream);

/// Galton–Watson offspring law handle.
pub struct FbOffspringLaw(OffspringLaw);

/// Branching mechanism handle.
pub struct FbMechanism(BranchingMechanism);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FbStatus {
    match e {
        Error::Domain { .. } => FbStatus::Domain,
        Error::Precondition(_) => FbStatus::Precondition,
        Error::Input(_) => FbStatus::Input,
        Error::Censored { .. } => FbStatus::Censored,
        Error::Numerical(_) => FbStatus::Numerical,
        Error::Accuracy { .. } => FbStatus::Accuracy,
        Error::Resource(_) => FbStatus::Resource,
    }
}

struct Failure(FbStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(FbStatus::NullPointer, format!("{name} is null"))
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> FbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FbStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {message}"));
            FbStatus::Panic
        }
    }
}

/// # Safety
/// `p` is null or valid for writes.
unsafe fn write<T>(p: *mut T, name: &str, value: T) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    p.write(value);
    Ok(())
}

/// # Safety
/// `p` is null or valid for `len` reads.
unsafe fn slice<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// # Safety
/// `p` is null or valid for `len` writes.
unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, name: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

/// # Safety
/// `p` is null or a live handle.
unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

/// # Safety
/// `p` is null or a live handle not aliased elsewhere.
unsafe fn handle_mut<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(name))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated and
/// always NUL-terminated when `len > 0`) and returns the length the full
/// message needs including its NUL. Returns 0 when there is no message.
///
/// # Safety
/// `buf` is null or valid for `len` bytes of writes.
#[no_mangle]
pub unsafe extern "C" fn fb_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let slot = slot.borrow();
        let Some(msg) = slot.as_ref() else {
            return 0;
        };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n - 1) = 0;
        }
        bytes.len()
    })
}

/// Clears the calling thread's last error message.
#[no_mangle]
pub extern "C" fn fb_clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// `Γ(x)` for `x > 0`.
///
/// # Safety
/// `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fb_gamma(x: f64, out: *mut f64) -> FbStatus {
    guard(|| write(out, "out", special_fn::gamma_fn(x)?))
}

/// `E_β(x)` for `0 < β <= 1`.
///
/// # Safety
/// `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fb_mittag_leffler(beta: f64, x: f64, out: *mut f64) -> FbStatus {
    guard(|| write(out, "out", special_fn::mittag_leffler(beta, x)?))
}

/// Fractional Yule pmf `p(1), …, p(n_max)` started from one individual.
///
/// # Safety
/// `out` is valid for `n_max` writes.
#[no_mangle]
pub unsafe extern "C" fn fb_yule_pmf(
    t: f64,
    theta: f64,
    beta: f64,
    out: *mut f64,
    n_max: usize,
) -> FbStatus {
    guard(|| {
        let dst = slice_mut(out, n_max, "out")?;
        let values = csbp::yule_pmf_upto(n_max, t, theta, beta)?;
        dst.copy_from_slice(&values);
        Ok(())
    })
}

/// Creates stream `stream_id` of `seed`.
///
/// # Safety
/// `out` is valid for writes; the handle must be released with [`fb_rng_free`].
#[no_mangle]
pub unsafe extern "C" fn fb_rng_new(seed: u64, stream_id: u64, out: *mut *mut FbRng) -> FbStatus {
    guard(|| {
        let rng = Box::new(FbRng(RngStream::new(seed, stream_id)));
        write(out, "out", Box::into_raw(rng))
    })
}

/// Releases a stream; null is ignored.
///
/// # Safety
/// `rng` is null or a handle from [`fb_rng_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fb_rng_free(rng: *mut FbRng) {
    if !rng.is_null() {
        drop(Box::from_raw(rng));
    }
}

/// One draw of the one-sided stable law with Laplace transform `e^{-s^β}`.
///
/// # Safety
/// `rng` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fb_sample_one_sided_stable(
    rng: *mut FbRng,
    beta: f64,
    out: *mut f64,
) -> FbStatus {
    guard(|| {
        let rng = handle_mut(rng, "rng")?;
        write(
            out,
            "out",
            random::sample_one_sided_stable(beta, &mut rng.0)?,
        )
    })
}

/// One draw of the inverse stable subordinator `E(t)`.
///
/// # Safety
/// `rng` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fb_sample_inverse_marginal(
    rng: *mut FbRng,
    beta: f64,
    t: f64,
    out: *mut f64,
) -> FbStatus {
    guard(|| {
        let rng = handle_mut(rng, "rng")?;
        write(
            out,
            "out",
            random::sample_inverse_marginal(beta, t, &mut rng.0)?,
        )
    })
}

/// Offspring law from a dense pmf `pmf[k] = P(k children)`.
///
/// # Safety
/// `pmf` is valid for `len` reads; `out` is valid for writes. Release with
/// [`fb_offspring_law_free`].
#[no_mangle]
pub unsafe extern "C" fn fb_offspring_law_new(
    pmf: *const f64,
    len: usize,
    out: *mut *mut FbOffspringLaw,
) -> FbStatus {
    guard(|| {
        let pmf = slice(pmf, len, "pmf")?;
        let law = Box::new(FbOffspringLaw(OffspringLaw::new(pmf.to_vec())?));
        write(out, "out", Box::into_raw(law))
    })
}

/// Releases an offspring law; null is ignored.
///
/// # Safety
/// `law` is null or a handle from [`fb_offspring_law_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fb_offspring_law_free(law: *mut FbOffspringLaw) {
    if !law.is_null() {
        drop(Box::from_raw(law));
    }
}

/// Mean number of children.
///
/// # Safety
/// `law` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fb_offspring_law_mean(
    law: *const FbOffspringLaw,
    out: *mut f64,
) -> FbStatus {
    guard(|| write(out, "out", handle(law, "law")?.0.mean()))
}

/// Population after `n_gen` generations from `j` ancestors.
///
/// # Safety
/// `rng` and `law` are live handles; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fb_gw_final(
    rng: *mut FbRng,
    law: *const FbOffspringLaw,
    j: u64,
    n_gen: u64,
    out: *mut u64,
) -> FbStatus {
    guard(|| {
        let rng = handle_mut(rng, "rng")?;
        let law = handle(law, "law")?;
        write(out, "out", gw::gw_final(j, &law.0, n_gen, &mut rng.0)?)
    })
}

/// Branching mechanism `ψ(u) = bu + cu² + Σ w_i (e^{-z_i u} - 1 + z_i u)`.
///
/// # Safety
/// `jump_sizes` and `jump_weights` are valid for `n_jumps` reads (either may
/// be null when `n_jumps` is 0); `out` is valid for writes. Release with
/// [`fb_mechanism_free`].
#[no_mangle]
pub unsafe extern "C" fn fb_mechanism_new(
    b: f64,
    c: f64,
    jump_sizes: *const f64,
    jump_weights: *const f64,
    n_jumps: usize,
    out: *mut *mut FbMechanism,
) -> FbStatus {
    guard(|| {
        let sizes = slice(jump_sizes, n_jumps, "jump_sizes")?;
        let weights = slice(jump_weights, n_jumps, "jump_weights")?;
        let jumps = sizes.iter().copied().zip(weights.iter().copied()).collect();
        let mech = Box::new(FbMechanism(BranchingMechanism::new(b, c, jumps)?));
        write(out, "out", Box::into_raw(mech))
    })
}

/// Releases a mechanism; null is ignored.
///
/// # Safety
/// `mech` is null or a handle from [`fb_mechanism_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fb_mechanism_free(mech: *mut FbMechanism) {
    if !mech.is_null() {
        drop(Box::from_raw(mech));
    }
}

/// `ψ(u)`.
///
/// # Safety
/// `mech` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fb_psi(mech: *const FbMechanism, u: f64, out: *mut f64) -> FbStatus {
    guard(|| write(out, "out", csbp::psi_eval(&handle(mech, "mech")?.0, u)?))
}

/// Mean of the time-changed process started at `x`; `beta = 1` is no time
/// change.
///
/// # Safety
/// `mech` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fb_tc_mean(
    mech: *const FbMechanism,
    x: f64,
    t: f64,
    beta: f64,
    out: *mut f64,
) -> FbStatus {
    guard(|| {
        write(
            out,
            "out",
            csbp::tc_mean(&handle(mech, "mech")?.0, x, t, beta)?,
        )
    })
}

/// Second moment of the time-changed process started at `x`.
///
/// # Safety
/// `mech` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fb_tc_second_moment(
    mech: *const FbMechanism,
    x: f64,
    t: f64,
    beta: f64,
    out: *mut f64,
) -> FbStatus {
    guard(|| {
        write(
            out,
            "out",
            csbp::tc_second_moment(&handle(mech, "mech")?.0, x, t, beta)?,
        )
    })
}

/// Laplace exponent `ν_t(λ)` at each of the `n` increasing times in `t_grid`.
///
/// # Safety
/// `mech` is a live handle; `t_grid` is valid for `n` reads and `out` for
/// `n` writes.
#[no_mangle]
pub unsafe extern "C" fn fb_solve_exponent(
    mech: *const FbMechanism,
    lambda: f64,
    t_grid: *const f64,
    n: usize,
    out: *mut f64,
) -> FbStatus {
    guard(|| {
        let mech = handle(mech, "mech")?;
        let grid = slice(t_grid, n, "t_grid")?;
        let dst = slice_mut(out, n, "out")?;
        let nu = csbp::solve_exponent(&mech.0, lambda, grid)?;
        dst.copy_from_slice(nu.values());
        Ok(())
    })
}
