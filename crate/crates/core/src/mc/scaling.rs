use crate::csbp::{InnerProcess, TcProcessSpec, TimeChange, DEFAULT_FELLER_STEP};
use crate::error::{domain, Error, Result};
use crate::gw::{gw_final, OffspringLaw};
use crate::mc::{ks_two_sample, par_replicates};
use crate::random::{sample_renewal_count, RngStream, WaitingTimeLaw};

/// Offspring laws indexed by the population scale `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OffspringFamily {
    /// [`OffspringLaw::feller_limit`]`(b, c, k)`: rescaled by `c_k = k` the
    /// Galton–Watson process converges to the Feller diffusion with
    /// mechanism `bu + cu²`.
    FellerLimit { b: f64, c: f64 },
    /// Every individual has exactly one child.
    Frozen,
}

impl OffspringFamily {
    pub fn law_at(&self, k: f64) -> Result<OffspringLaw> {
        match *self {
            Self::FellerLimit { b, c } => OffspringLaw::feller_limit(b, c, k),
            Self::Frozen => OffspringLaw::from_pairs(&[(1, 1.0)]),
        }
    }

    /// Mechanism coefficients `(b, c)` of the limit.
    pub fn limit(&self) -> (f64, f64) {
        match *self {
            Self::FellerLimit { b, c } => (b, c),
            Self::Frozen => (0.0, 0.0),
        }
    }
}

/// Parameters of a scaling-limit run.
///
/// At level `k` the population starts from `⌊k x0⌋` individuals, runs
/// `N_{n t}` generations with `n` chosen so that `ñ_n = k`, and is divided
/// by `c_k = k`. The reference is `X(E(t))` for the limiting Feller
/// diffusion from `x0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingExperiment {
    pub family: OffspringFamily,
    pub wait: WaitingTimeLaw,
    pub beta: f64,
    pub x0: f64,
    pub t: f64,
    pub levels: Vec<u64>,
    pub n_rep: usize,
}

/// KS distances between the rescaled process and its limit, per level.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub levels: Vec<u64>,
    pub ks_distances: Vec<f64>,
    pub t: f64,
    pub n_rep: usize,
}

impl ConvergenceReport {
    /// Scale `√(2 / n_rep)` of the two-sample KS statistic under equal laws.
    pub fn noise(&self) -> f64 {
        (2.0 / self.n_rep as f64).sqrt()
    }

    /// Each distance is at most the previous one plus `factor · noise`.
    pub fn nonincreasing_within(&self, factor: f64) -> bool {
        let slack = factor * self.noise();
        self.ks_distances.windows(2).all(|w| w[1] <= w[0] + slack)
    }

    pub fn final_distance(&self) -> f64 {
        *self.ks_distances.last().expect("at least one level")
    }
}

impl ScalingExperiment {
    pub fn run(&self, rng: &mut RngStream) -> Result<ConvergenceReport> {
        scaling_limit_experiment(self, rng)
    }
}

/// Rescaled time-changed Galton–Watson marginals at time `t` versus the
/// time-changed Feller limit, one KS distance per level.
pub fn scaling_limit_experiment(
    exp: &ScalingExperiment,
    rng: &mut RngStream,
) -> Result<ConvergenceReport> {
    exp.wait.validate()?;
    if exp.wait.tail_index() != exp.beta {
        return Err(Error::Precondition(format!(
            "waiting-time tail index {} does not match beta = {}",
            exp.wait.tail_index(),
            exp.beta
        )));
    }
    if !(exp.t > 0.0) || !exp.t.is_finite() {
        return Err(domain("t", exp.t, "finite t > 0"));
    }
    if !(exp.x0 > 0.0) || !exp.x0.is_finite() {
        return Err(domain("x0", exp.x0, "finite x0 > 0"));
    }
    if exp.levels.is_empty() || exp.levels.windows(2).any(|w| w[1] <= w[0]) || exp.levels[0] == 0 {
        return Err(Error::Precondition(
            "levels must be positive and strictly increasing".into(),
        ));
    }
    if exp.n_rep < 2 {
        return Err(Error::Precondition("n_rep must be at least 2".into()));
    }
    let (b, c) = exp.family.limit();
    let spec = TcProcessSpec::new(InnerProcess::Feller { x0: exp.x0, b, c }, exp.beta)?;
    let mut ks_distances = Vec::with_capacity(exp.levels.len());
    for &level in &exp.levels {
        let k = level as f64;
        let law = exp.family.law_at(k)?;
        let horizon = exp.wait.time_scale_for(k)? * exp.t;
        let z0 = (k * exp.x0).floor() as u64;
        let scaled = par_replicates(rng, exp.n_rep, |r| {
            let n = sample_renewal_count(&exp.wait, horizon, r)?;
            Ok(gw_final(z0, &law, n, r)? as f64 / k)
        })?;
        let plan = TimeChange::plan(spec, exp.t, DEFAULT_FELLER_STEP, rng)?;
        let grid = [exp.t];
        let reference = par_replicates(rng, exp.n_rep, |r| Ok(plan.sample(&grid, r)?.values()[0]))?;
        ks_distances.push(ks_two_sample(&scaled, &reference)?);
    }
    Ok(ConvergenceReport {
        levels: exp.levels.clone(),
        ks_distances,
        t: exp.t,
        n_rep: exp.n_rep,
    })
}
