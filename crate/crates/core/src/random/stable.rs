use std::f64::consts::PI;

use rand::distr::Open01;
use rand::Rng;
use rand_distr::Exp1;

use crate::error::{check_beta_closed, check_beta_open, domain, Result};

/// `ln D` for a one-sided stable `D` with `E[e^{-sD}] = e^{-s^β}`, by
/// Kanter's representation
/// `D = sin(βU) / sin(U)^{1/β} · (sin((1-β)U) / W)^{(1-β)/β}`,
/// `U ~ Uniform(0, π)`, `W ~ Exp(1)`.
pub(crate) fn ln_stable_unchecked<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> f64 {
    let u = PI * rng.sample::<f64, _>(Open01);
    let w: f64 = rng.sample::<f64, _>(Exp1).max(f64::MIN_POSITIVE);
    let r = (1.0 - beta) / beta;
    (beta * u).sin().ln() + r * ((1.0 - beta) * u).sin().ln() - u.sin().ln() / beta - r * w.ln()
}

/// One sample of `D(1)` for the standard β-stable subordinator.
pub fn sample_one_sided_stable<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> Result<f64> {
    check_beta_open(beta)?;
    Ok(ln_stable_unchecked(beta, rng).exp())
}

pub(crate) fn inverse_marginal_unchecked<R: Rng + ?Sized>(beta: f64, t: f64, rng: &mut R) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    if beta == 1.0 {
        return t;
    }
    // E(t) = (t / D)^β
    (beta * (t.ln() - ln_stable_unchecked(beta, rng))).exp()
}

/// One sample of the inverse subordinator `E(t)`, via `(t / D)^β`.
///
/// `beta = 1` is the degenerate clock `E(t) = t`.
pub fn sample_inverse_marginal<R: Rng + ?Sized>(beta: f64, t: f64, rng: &mut R) -> Result<f64> {
    check_beta_closed(beta)?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain("t", t, "finite t >= 0"));
    }
    Ok(inverse_marginal_unchecked(beta, t, rng))
}
