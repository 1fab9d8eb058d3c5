//! Gamma, one-parameter Mittag–Leffler, and the L1 Caputo derivative.
//!
//! All functions are pure; the Mittag–Leffler evaluator picks one of three
//! routes depending on the argument:
//!
//! - `x >= -1`: the power series, summed until terms fall below `1e-16`
//!   relative to the partial sum.
//! - large negative `x`: the algebraic asymptotic expansion
//!   `-Σ x^{-k} / Γ(1 - βk)`, used only when its smallest retained terms
//!   are below double-precision resolution.
//! - otherwise: the completely monotone integral representation
//!   `E_β(x) = sin(βπ)/(πβ) ∫ |x| exp(-w^{1/β}) / (w² + 2w|x|cos βπ + x²) dw`,
//!   integrated adaptively. The integrand is positive, so the result keeps
//!   full relative accuracy where the alternating series would not.

use std::f64::consts::PI;

use statrs::function::gamma as sgamma;

use crate::error::{check_beta_closed, check_beta_open, domain, Error, Result};
use crate::quad;

/// Absolute (relative-to-sum) term tolerance for the power series.
pub const SERIES_TERM_TOL: f64 = 1e-16;
/// Hard cap on the number of series terms.
pub const SERIES_MAX_TERMS: usize = 10_000;

/// Γ(x) for `x > 0`; exact factorials at small integers.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("x", x, "finite x > 0"));
    }
    if x == x.floor() && x <= 23.0 {
        return Ok((2..x as u64).map(|k| k as f64).product());
    }
    Ok(sgamma::gamma(x))
}

/// ln Γ(x) for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("x", x, "finite x > 0"));
    }
    Ok(sgamma::ln_gamma(x))
}

/// 1/Γ(x) for any real x; zero at the poles.
pub(crate) fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x > 170.0 {
        return (-sgamma::ln_gamma(x)).exp();
    }
    if x < 0.5 {
        // reflection: 1/Γ(x) = sin(πx) Γ(1-x) / π
        return (PI * x).sin() * sgamma::gamma(1.0 - x) / PI;
    }
    1.0 / sgamma::gamma(x)
}

/// Validated `(beta, x)` pair for [`mittag_leffler`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams {
    beta: f64,
    x: f64,
}

impl MlParams {
    pub fn new(beta: f64, x: f64) -> Result<Self> {
        check_beta_closed(beta)?;
        if !x.is_finite() {
            return Err(domain("x", x, "finite"));
        }
        Ok(Self { beta, x })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn eval(&self) -> Result<f64> {
        ml_unchecked(self.beta, self.x)
    }
}

/// The Mittag–Leffler function `E_β(x) = Σ_r x^r / Γ(rβ + 1)` for `0 < β <= 1`.
pub fn mittag_leffler(beta: f64, x: f64) -> Result<f64> {
    MlParams::new(beta, x)?.eval()
}

fn ml_unchecked(beta: f64, x: f64) -> Result<f64> {
    if beta == 1.0 {
        return Ok(x.exp());
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x >= -1.0 {
        return ml_series(beta, x);
    }
    if let Some(v) = ml_asymptotic(beta, x) {
        return Ok(v);
    }
    ml_integral(beta, x)
}

fn ml_series(beta: f64, x: f64) -> Result<f64> {
    let ln_abs = x.abs().ln();
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for r in 1..SERIES_MAX_TERMS {
        let rf = r as f64;
        let arg = rf * beta + 1.0;
        let pow = x.powi(r as i32);
        let term = if arg < 170.0 && pow.is_finite() && pow != 0.0 {
            pow / sgamma::gamma(arg)
        } else {
            let sign = if x < 0.0 && r % 2 == 1 { -1.0 } else { 1.0 };
            sign * (rf * ln_abs - sgamma::ln_gamma(arg)).exp()
        };
        sum += term;
        if !sum.is_finite() {
            return Ok(sum);
        }
        let mag = term.abs();
        if mag <= SERIES_TERM_TOL * sum.abs().max(f64::MIN_POSITIVE) && mag <= prev {
            return Ok(sum);
        }
        prev = mag;
    }
    Err(Error::Numerical(format!(
        "Mittag-Leffler series did not converge in {SERIES_MAX_TERMS} terms (beta = {beta}, x = {x})"
    )))
}

/// Asymptotic expansion for large negative x; `None` if it cannot reach
/// double precision at this argument.
fn ml_asymptotic(beta: f64, x: f64) -> Option<f64> {
    let inv = 1.0 / x;
    let mut pow = 1.0;
    let mut sum = 0.0;
    let mut small_run = 0;
    let mut prev_nonzero = f64::INFINITY;
    for k in 1..=80 {
        pow *= inv;
        let term = -pow * recip_gamma(1.0 - beta * k as f64);
        if term == 0.0 {
            continue;
        }
        let mag = term.abs();
        if mag > prev_nonzero && small_run == 0 {
            // terms started growing before reaching resolution
            return None;
        }
        prev_nonzero = mag;
        sum += term;
        if mag < 1e-17 * sum.abs() {
            small_run += 1;
            if small_run >= 2 {
                return Some(sum);
            }
        } else {
            small_run = 0;
        }
    }
    None
}

fn ml_integral(beta: f64, x: f64) -> Result<f64> {
    let a = -x;
    let (sin, cos) = (beta * PI).sin_cos();
    let upper = 60f64.powf(beta);
    let (shift, height) = (a * cos, a * sin);
    let f = |w: f64| a * (-w.powf(1.0 / beta)).exp() / ((w + shift).powi(2) + height * height);
    let mut breaks = vec![1.0, 0.25 * upper];
    if cos < 0.0 {
        // near-pole at w0 with half-width a·sin(βπ)
        let w0 = -shift;
        breaks.push(w0);
        for k in [1.0, 4.0, 16.0] {
            breaks.extend([w0 - k * height, w0 + k * height]);
        }
    }
    let integral = quad::integrate(f, 0.0, upper, &breaks, 1e-300, 1e-13)?;
    Ok(sin / (PI * beta) * integral)
}

/// Values sampled on a strictly increasing, nonnegative time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    t_grid: Vec<f64>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(t_grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if t_grid.len() != values.len() {
            return Err(Error::Precondition(format!(
                "grid has {} points but {} values",
                t_grid.len(),
                values.len()
            )));
        }
        check_time_grid(&t_grid)?;
        Ok(Self { t_grid, values })
    }

    /// Samples `f` on `t_grid`.
    pub fn from_fn<F: FnMut(f64) -> f64>(t_grid: Vec<f64>, f: F) -> Result<Self> {
        let values = t_grid.iter().copied().map(f).collect();
        Self::new(t_grid, values)
    }

    /// `n + 1` equally spaced points on `[start, end]`.
    pub fn uniform_grid(start: f64, end: f64, n: usize) -> Vec<f64> {
        let h = (end - start) / n as f64;
        (0..=n).map(|i| start + h * i as f64).collect()
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.t_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_grid.is_empty()
    }

    /// The common step if the grid is uniform (relative tolerance 1e-9).
    pub fn uniform_step(&self) -> Option<f64> {
        uniform_step(&self.t_grid)
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.t_grid, self.values)
    }
}

pub(crate) fn check_time_grid(t_grid: &[f64]) -> Result<()> {
    if let Some(&t0) = t_grid.first() {
        if !(t0 >= 0.0) || !t0.is_finite() {
            return Err(domain("t_grid[0]", t0, "finite and >= 0"));
        }
    }
    if let Some(i) = t_grid
        .windows(2)
        .position(|w| !(w[1] > w[0]) || !w[1].is_finite())
    {
        return Err(Error::Precondition(format!(
            "time grid must be strictly increasing (index {})",
            i + 1
        )));
    }
    Ok(())
}

pub(crate) fn uniform_step(t_grid: &[f64]) -> Option<f64> {
    if t_grid.len() < 2 {
        return None;
    }
    let n = t_grid.len() - 1;
    let h = (t_grid[n] - t_grid[0]) / n as f64;
    let ok = t_grid
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h);
    ok.then_some(h)
}

/// L1-scheme Caputo derivative of order `beta ∈ (0, 1)`.
///
/// The lower terminal is `t_grid[0]`. The result is defined on
/// `t_grid[1..]`, i.e. every point that has history behind it:
///
/// `D^β f(t_n) ≈ h^{-β}/Γ(2-β) Σ_{k<n} [(k+1)^{1-β} - k^{1-β}] (f_{n-k} - f_{n-k-1})`.
pub fn caputo_l1(f: &GridFunction, beta: f64) -> Result<GridFunction> {
    check_beta_open(beta)?;
    let h = f.uniform_step().ok_or_else(|| {
        Error::Precondition("caputo_l1 requires a uniform grid with at least two points".into())
    })?;
    let n = f.len() - 1;
    let one_minus = 1.0 - beta;
    let weights: Vec<f64> = (0..n)
        .map(|k| ((k + 1) as f64).powf(one_minus) - (k as f64).powf(one_minus))
        .collect();
    let diffs: Vec<f64> = f.values.windows(2).map(|w| w[1] - w[0]).collect();
    let scale = h.powf(-beta) / sgamma::gamma(2.0 - beta);
    let values = (1..=n)
        .map(|m| {
            // diffs[m-1-k] = f_{m-k} - f_{m-k-1}
            scale
                * weights[..m]
                    .iter()
                    .zip(diffs[..m].iter().rev())
                    .map(|(w, d)| w * d)
                    .sum::<f64>()
        })
        .collect();
    GridFunction::new(f.t_grid[1..].to_vec(), values)
}
