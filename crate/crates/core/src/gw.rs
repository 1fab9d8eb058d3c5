//! Galton–Watson processes, their renewal time changes and the
//! branching-inequality experiment.

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{domain, Error, Result};
use crate::mc::{par_replicates, McEstimate};
use crate::path::{Interpolation, PathGrid};
use crate::random::{renewal_times, sample_renewal_count, RngStream, WaitingTimeLaw};
use crate::special_fn::check_time_grid;

const PMF_SUM_TOL: f64 = 1e-12;
const TRUNCATION_MASS: f64 = 1e-12;
const MAX_PGF_DEGREE: usize = 1 << 22;
// Below this population the per-individual inverse-CDF loop is cheaper than
// the multinomial split.
const DIRECT_STEP_MAX: u64 = 32;

/// A finitely supported offspring distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct OffspringLaw {
    pmf: Vec<f64>,
    cdf: Vec<f64>,
    // tail[k] = P(ξ >= k)
    tail: Vec<f64>,
    mean: f64,
    variance: f64,
}

impl OffspringLaw {
    /// From a dense pmf: `pmf[k] = P(ξ = k)`.
    pub fn new(mut pmf: Vec<f64>) -> Result<Self> {
        if let Some((k, p)) = pmf
            .iter()
            .enumerate()
            .find(|(_, p)| !(**p >= 0.0 && p.is_finite()))
        {
            return Err(Error::Precondition(format!(
                "offspring probability p({k}) = {p} is invalid"
            )));
        }
        while pmf.last() == Some(&0.0) {
            pmf.pop();
        }
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > PMF_SUM_TOL {
            return Err(Error::Precondition(format!(
                "offspring pmf sums to {total}, not 1"
            )));
        }
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = pmf
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        *cdf.last_mut().expect("nonempty pmf") = 1.0;
        let mut tail = vec![0.0; pmf.len()];
        let mut acc = 0.0;
        for k in (0..pmf.len()).rev() {
            acc += pmf[k];
            tail[k] = acc;
        }
        let mean: f64 = pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        let second: f64 = pmf
            .iter()
            .enumerate()
            .map(|(k, p)| (k * k) as f64 * p)
            .sum();
        Ok(Self {
            pmf,
            cdf,
            tail,
            mean,
            variance: second - mean * mean,
        })
    }

    /// From `(offspring count, probability)` pairs; repeated counts add up.
    pub fn from_pairs(pairs: &[(usize, f64)]) -> Result<Self> {
        let len = pairs.iter().map(|&(k, _)| k + 1).max().unwrap_or(0);
        let mut pmf = vec![0.0; len];
        for &(k, p) in pairs {
            pmf[k] += p;
        }
        Self::new(pmf)
    }

    /// Three-point law on `{0, 1, K}` with mean `1 - b/k` and variance `2c`,
    /// `K = 2 + ⌈2c⌉`.
    ///
    /// `Z^{(k)}_{⌊kt⌋} / k` started from `⌊k x⌋` converges to the Feller
    /// diffusion `dX = -bX dt + √(2cX) dW` as `k → ∞`. `b = c = 0` gives the
    /// frozen law `pmf{1: 1}`.
    pub fn feller_limit(b: f64, c: f64, k: f64) -> Result<Self> {
        if !b.is_finite() {
            return Err(domain("b", b, "finite"));
        }
        if !(c >= 0.0) || !c.is_finite() {
            return Err(domain("c", c, "finite c >= 0"));
        }
        if !(k >= 1.0) || !k.is_finite() {
            return Err(domain("k", k, "finite k >= 1"));
        }
        let m = 1.0 - b / k;
        let v = 2.0 * c;
        let big = 2 + (2.0 * c).ceil() as usize;
        let kf = big as f64;
        let p_big = (v + m * m - m) / (kf * (kf - 1.0));
        let p1 = m - kf * p_big;
        let p0 = 1.0 - p1 - p_big;
        let eps = 1e-15;
        if p_big < -eps || p1 < -eps || p0 < -eps {
            return Err(Error::Precondition(format!(
                "no three-point law on {{0, 1, {big}}} has mean {m} and variance {v} \
                 (b = {b}, c = {c}, k = {k}); increase k"
            )));
        }
        Self::from_pairs(&[(0, p0.max(0.0)), (1, p1.max(0.0)), (big, p_big.max(0.0))])
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn max_offspring(&self) -> usize {
        self.pmf.len() - 1
    }

    /// One offspring count by inverse CDF.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.random();
        self.cdf.partition_point(|&c| c <= u) as u64
    }

    /// Generating function `f(s) = Σ p_k s^k`.
    pub fn pgf(&self, s: f64) -> f64 {
        self.pmf.iter().rev().fold(0.0, |acc, p| acc * s + p)
    }

    /// `f_n(s)`, the `n`-fold composition of [`pgf`](Self::pgf).
    pub fn pgf_iterate(&self, s: f64, n: u64) -> f64 {
        (0..n).fold(s, |acc, _| self.pgf(acc))
    }

    /// Law of `Z_n` given `Z_0 = j`, by polynomial composition.
    ///
    /// Coefficients are truncated once the retained mass reaches `1 - 1e-12`.
    pub fn generation_pmf(&self, j: u64, n: u64) -> Result<Vec<f64>> {
        let mut g = vec![0.0, 1.0];
        for _ in 0..n {
            g = self.compose_after(&g)?;
        }
        let mut out = vec![1.0];
        for _ in 0..j {
            out = truncate(poly_mul(&out, &g))?;
        }
        Ok(out)
    }

    // f(g(s)) = Σ p_i g(s)^i
    fn compose_after(&self, g: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; 1];
        let mut power = vec![1.0];
        for (i, &p) in self.pmf.iter().enumerate() {
            if i > 0 {
                power = truncate(poly_mul(&power, g))?;
            }
            if p > 0.0 {
                if out.len() < power.len() {
                    out.resize(power.len(), 0.0);
                }
                for (o, c) in out.iter_mut().zip(&power) {
                    *o += p * c;
                }
            }
        }
        truncate(out)
    }
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (o, &y) in out[i..].iter_mut().zip(b) {
            *o += x * y;
        }
    }
    out
}

fn truncate(mut p: Vec<f64>) -> Result<Vec<f64>> {
    let mut acc = 0.0;
    if let Some(cut) = p.iter().position(|c| {
        acc += c;
        acc >= 1.0 - TRUNCATION_MASS
    }) {
        p.truncate(cut + 1);
    }
    if p.len() > MAX_PGF_DEGREE {
        return Err(Error::Resource(format!(
            "generating-function iterate exceeds degree {MAX_PGF_DEGREE}"
        )));
    }
    Ok(p)
}

/// `Z_0, Z_1, …, Z_n` of one Galton–Watson run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GwPath {
    generations: Vec<u64>,
}

impl GwPath {
    pub fn generations(&self) -> &[u64] {
        &self.generations
    }

    pub fn last(&self) -> u64 {
        *self.generations.last().expect("path has Z_0")
    }
}

/// Total offspring of `z` individuals.
pub fn gw_step<R: Rng + ?Sized>(z: u64, law: &OffspringLaw, rng: &mut R) -> Result<u64> {
    let max = law.max_offspring() as u64;
    if z.checked_mul(max).is_none() {
        return Err(Error::Resource(format!(
            "population {z} overflows the next generation"
        )));
    }
    if z <= DIRECT_STEP_MAX {
        return Ok((0..z).map(|_| law.sample_one(rng)).sum());
    }
    // multinomial split of z over the support via conditional binomials
    let mut left = z;
    let mut total = 0u64;
    for (k, &p) in law.pmf.iter().enumerate() {
        if left == 0 {
            break;
        }
        if p == 0.0 {
            continue;
        }
        let rest = law.tail[k];
        let count = if k == law.pmf.len() - 1 || p >= rest {
            left
        } else {
            Binomial::new(left, p / rest)
                .map_err(|e| Error::Numerical(format!("binomial split: {e}")))?
                .sample(rng)
        };
        total += count * k as u64;
        left -= count;
    }
    Ok(total)
}

/// Runs `n_gen` generations from `j` ancestors and returns only `Z_{n_gen}`.
pub fn gw_final<R: Rng + ?Sized>(
    j: u64,
    law: &OffspringLaw,
    n_gen: u64,
    rng: &mut R,
) -> Result<u64> {
    let mut z = j;
    for _ in 0..n_gen {
        if z == 0 {
            break;
        }
        z = gw_step(z, law, rng)?;
    }
    Ok(z)
}

/// A Galton–Watson path of `n_gen` generations from `j` ancestors.
pub fn simulate_gw<R: Rng + ?Sized>(
    j: u64,
    law: &OffspringLaw,
    n_gen: u64,
    rng: &mut R,
) -> Result<GwPath> {
    let mut generations = Vec::with_capacity(n_gen as usize + 1);
    let mut z = j;
    generations.push(z);
    for _ in 0..n_gen {
        if z > 0 {
            z = gw_step(z, law, rng)?;
        }
        generations.push(z);
    }
    Ok(GwPath { generations })
}

/// `Z_{N_t}` on `t_grid`, one renewal path shared across the grid.
pub fn simulate_time_changed_gw<R: Rng + ?Sized>(
    j: u64,
    law: &OffspringLaw,
    wait: &WaitingTimeLaw,
    t_grid: &[f64],
    rng: &mut R,
) -> Result<PathGrid> {
    check_time_grid(t_grid)?;
    let Some(&t_max) = t_grid.last() else {
        return Err(Error::Precondition("t_grid is empty".into()));
    };
    let times = renewal_times(wait, t_max, rng)?;
    let path = simulate_gw(j, law, times.len() as u64, rng)?;
    let values = t_grid
        .iter()
        .map(|&t| path.generations[times.partition_point(|&s| s <= t)] as f64)
        .collect();
    Ok(PathGrid::from_parts_unchecked(
        t_grid.to_vec(),
        values,
        Interpolation::Step,
    ))
}

/// Parameters of the branching-inequality experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityExperiment {
    pub j: u64,
    pub k: u64,
    pub lambda: f64,
    pub t: f64,
    pub law: OffspringLaw,
    pub wait: WaitingTimeLaw,
    pub n_rep: usize,
}

/// Fewest replicates accepted by the inequality experiment.
pub const MIN_INEQUALITY_REPLICATES: usize = 1000;

impl InequalityExperiment {
    pub fn run(&self, rng: &mut RngStream) -> Result<McEstimate> {
        branching_inequality_experiment(
            self.j,
            self.k,
            self.lambda,
            self.t,
            &self.law,
            &self.wait,
            self.n_rep,
            rng,
        )
    }
}

/// Monte Carlo estimate of `K_{j,k}(t) = E_{j+k}[e^{-λZ_t}] - E_j[e^{-λZ_t}] E_k[e^{-λZ_t}]`
/// for the renewal-time-changed process `Z_t = Z_{N_t}`.
///
/// The first term couples two independent subpopulations of sizes `j` and `k`
/// through one shared renewal count; the two factors of the product use
/// independent counts. The standard error comes from the delta method.
#[allow(clippy::too_many_arguments)]
pub fn branching_inequality_experiment(
    j: u64,
    k: u64,
    lambda: f64,
    t: f64,
    law: &OffspringLaw,
    wait: &WaitingTimeLaw,
    n_rep: usize,
    rng: &mut RngStream,
) -> Result<McEstimate> {
    if n_rep < MIN_INEQUALITY_REPLICATES {
        return Err(Error::Precondition(format!(
            "n_rep = {n_rep} is below the minimum {MIN_INEQUALITY_REPLICATES}"
        )));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(domain("lambda", lambda, "finite lambda > 0"));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain("t", t, "finite t > 0"));
    }
    wait.validate()?;
    let draws = par_replicates(rng, n_rep, |r| {
        let n = sample_renewal_count(wait, t, r)?;
        let z1 = gw_final(j, law, n, r)?;
        let z2 = gw_final(k, law, n, r)?;
        let a = (-lambda * (z1 + z2) as f64).exp();
        let n_j = sample_renewal_count(wait, t, r)?;
        let b = (-lambda * gw_final(j, law, n_j, r)? as f64).exp();
        let n_k = sample_renewal_count(wait, t, r)?;
        let c = (-lambda * gw_final(k, law, n_k, r)? as f64).exp();
        Ok((a, b, c))
    })?;
    let n = draws.len() as f64;
    let a_bar = draws.iter().map(|d| d.0).sum::<f64>() / n;
    let b_bar = draws.iter().map(|d| d.1).sum::<f64>() / n;
    let c_bar = draws.iter().map(|d| d.2).sum::<f64>() / n;
    // influence function of ā - b̄c̄
    let lin: Vec<f64> = draws
        .iter()
        .map(|&(a, b, c)| a - c_bar * b - b_bar * c)
        .collect();
    let lin_mean = lin.iter().sum::<f64>() / n;
    let var = lin.iter().map(|x| (x - lin_mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(McEstimate {
        mean: a_bar - b_bar * c_bar,
        std_error: (var / n).sqrt(),
        n: draws.len(),
    })
}
