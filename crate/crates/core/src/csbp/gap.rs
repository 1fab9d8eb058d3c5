use rand::RngCore;

use crate::csbp::{solve_exponent, BranchingMechanism};
use crate::error::{check_beta_closed, domain, Error, Result};
use crate::mc::McEstimate;
use crate::random::{inverse_marginal_unchecked, RngStream};

/// Fewest replicates accepted by [`tc_branching_gap`].
pub const MIN_GAP_REPLICATES: usize = 1000;

/// Monte Carlo estimate of
/// `E_{x+y}[e^{-λX(E(t))}] - E_x[·] E_y[·] = Cov(e^{-x ν_{E(t)}(λ)}, e^{-y ν_{E(t)}(λ)})`
/// for a Feller mechanism.
///
/// Draws `n_rep` marginals of `E(t)`, solves the exponent ODE once over the
/// sorted draws and returns the sample covariance with a delta-method
/// standard error. `β = 1` is exactly zero.
#[allow(clippy::too_many_arguments)]
pub fn tc_branching_gap(
    mech: &BranchingMechanism,
    x: f64,
    y: f64,
    lambda: f64,
    t: f64,
    beta: f64,
    n_rep: usize,
    rng: &mut RngStream,
) -> Result<McEstimate> {
    if !mech.is_feller() {
        return Err(Error::Precondition(
            "tc_branching_gap supports Feller mechanisms (no jumps) only".into(),
        ));
    }
    for (name, v) in [("x", x), ("y", y)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(domain(name, v, "finite and >= 0"));
        }
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain("t", t, "finite t >= 0"));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(domain("lambda", lambda, "finite lambda > 0"));
    }
    check_beta_closed(beta)?;
    if n_rep < MIN_GAP_REPLICATES {
        return Err(Error::Precondition(format!(
            "n_rep = {n_rep} is below the minimum {MIN_GAP_REPLICATES}"
        )));
    }
    if beta == 1.0 || t == 0.0 {
        return Ok(McEstimate {
            mean: 0.0,
            std_error: 0.0,
            n: n_rep,
        });
    }
    let mut r = RngStream::new(rng.next_u64(), rng.next_u64());
    let mut e: Vec<f64> = (0..n_rep)
        .map(|_| inverse_marginal_unchecked(beta, t, &mut r))
        .collect();
    e.sort_by(f64::total_cmp);
    let mut grid = e.clone();
    grid.dedup();
    let nu = solve_exponent(mech, lambda, &grid)?;
    let mut k = 0;
    let mut pairs = Vec::with_capacity(n_rep);
    for &u in &e {
        while grid[k] < u {
            k += 1;
        }
        let v = nu.values()[k];
        pairs.push(((-x * v).exp(), (-y * v).exp()));
    }
    let n = n_rep as f64;
    let fm = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let gm = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let prods: Vec<f64> = pairs.iter().map(|&(f, g)| (f - fm) * (g - gm)).collect();
    let cov = prods.iter().sum::<f64>() / (n - 1.0);
    let pm = prods.iter().sum::<f64>() / n;
    let var = prods.iter().map(|p| (p - pm).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(McEstimate {
        mean: cov,
        std_error: (var / n).sqrt(),
        n: n_rep,
    })
}
