use rand::Rng;

use crate::error::{check_beta_open, domain, Error, Result};
use crate::random::ln_stable_unchecked;

/// A stable subordinator sampled on a uniform operational-time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SubordinatorPath {
    u_grid: Vec<f64>,
    d_values: Vec<f64>,
}

impl SubordinatorPath {
    pub fn new(u_grid: Vec<f64>, d_values: Vec<f64>) -> Result<Self> {
        if u_grid.len() != d_values.len() || u_grid.is_empty() {
            return Err(Error::Precondition(
                "subordinator path needs equal, nonzero lengths".into(),
            ));
        }
        if !(d_values[0] >= 0.0) {
            return Err(Error::Precondition("D(0) must be nonnegative".into()));
        }
        if d_values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Precondition("D must be nondecreasing".into()));
        }
        if u_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Precondition("u grid must be increasing".into()));
        }
        Ok(Self { u_grid, d_values })
    }

    pub fn u_grid(&self) -> &[f64] {
        &self.u_grid
    }

    pub fn d_values(&self) -> &[f64] {
        &self.d_values
    }
}

/// The inverse `E(t)` read off a subordinator path on a physical-time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct InversePath {
    t_grid: Vec<f64>,
    e_values: Vec<f64>,
}

impl InversePath {
    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn e_values(&self) -> &[f64] {
        &self.e_values
    }
}

/// `D` on `n_steps + 1` equally spaced points of `[0, u_max]`.
///
/// Increments are i.i.d. `(u_max / n_steps)^{1/β} · D` by self-similarity.
pub fn sample_subordinator_path<R: Rng + ?Sized>(
    beta: f64,
    u_max: f64,
    n_steps: usize,
    rng: &mut R,
) -> Result<SubordinatorPath> {
    check_beta_open(beta)?;
    if !(u_max > 0.0) || !u_max.is_finite() {
        return Err(domain("u_max", u_max, "finite u_max > 0"));
    }
    if n_steps == 0 {
        return Err(Error::Precondition("n_steps must be at least 1".into()));
    }
    let du = u_max / n_steps as f64;
    let ln_scale = du.ln() / beta;
    let mut d = 0.0;
    let mut d_values = Vec::with_capacity(n_steps + 1);
    d_values.push(0.0);
    for _ in 0..n_steps {
        d += (ln_scale + ln_stable_unchecked(beta, rng)).exp();
        d_values.push(d);
    }
    let u_grid = (0..=n_steps).map(|i| du * i as f64).collect();
    Ok(SubordinatorPath { u_grid, d_values })
}

/// Grid index of the first point with `D(u) > t`, for each `t`.
pub(crate) fn first_passage_indices(d_values: &[f64], t_grid: &[f64]) -> Result<Vec<usize>> {
    let reached = *d_values.last().expect("nonempty path");
    t_grid
        .iter()
        .map(|&t| {
            let idx = d_values.partition_point(|&d| d <= t);
            if idx == d_values.len() {
                Err(Error::Censored { t, reached })
            } else {
                Ok(idx)
            }
        })
        .collect()
}

/// `E(t) = inf{u : D(u) > t}` on the path's grid.
///
/// Fails with [`Error::Censored`] naming the first `t` the path never exceeds.
pub fn invert_path(d: &SubordinatorPath, t_grid: &[f64]) -> Result<InversePath> {
    if t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Precondition("t grid must be nondecreasing".into()));
    }
    let idx = first_passage_indices(&d.d_values, t_grid)?;
    Ok(InversePath {
        t_grid: t_grid.to_vec(),
        e_values: idx.into_iter().map(|i| d.u_grid[i]).collect(),
    })
}
