//! Monte Carlo estimation, two-sample statistics and the scaling-limit
//! convergence experiment.

mod scaling;
mod stats;

use rand::RngCore;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::random::RngStream;

pub use scaling::{
    scaling_limit_experiment, ConvergenceReport, OffspringFamily, ScalingExperiment,
};
pub use stats::{
    chi_square_critical, chi_square_gof, chi_square_two_sample, ks_two_sample, merge_cells,
    ChiSquareResult,
};

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
}

impl McEstimate {
    /// `|mean - target| <= k · std_error + allowance`.
    pub fn within(&self, target: f64, k: f64, allowance: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error + allowance
    }

    /// Mean in units of standard errors.
    pub fn z_score(&self) -> f64 {
        self.mean / self.std_error
    }
}

/// Sample mean and standard error (sample standard deviation over `√n`).
pub fn estimate(samples: &[f64]) -> Result<McEstimate> {
    if samples.len() < 2 {
        return Err(Error::Input(format!(
            "estimate needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    if let Some(x) = samples.iter().find(|x| !x.is_finite()) {
        return Err(Error::Input(format!("non-finite sample {x}")));
    }
    let n = samples.len() as f64;
    // pairwise sums keep the result independent of the input order to rounding
    let mean = pairwise_sum(samples) / n;
    let sq: Vec<f64> = samples.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1.0);
    Ok(McEstimate {
        mean,
        std_error: (var / n).sqrt(),
        n: samples.len(),
    })
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Runs `f` once per replicate on independent substreams, in parallel.
///
/// Replicate `i` always sees substream `i` of a base stream drawn from `rng`,
/// so results are reproducible regardless of thread count.
pub fn par_replicates<T, F>(rng: &mut RngStream, n_rep: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngStream) -> Result<T> + Sync,
{
    let base = RngStream::new(rng.next_u64(), rng.next_u64());
    (0..n_rep)
        .into_par_iter()
        .map(|i| f(&mut base.substream(i as u64)))
        .collect()
}
