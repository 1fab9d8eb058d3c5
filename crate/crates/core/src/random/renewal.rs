use rand::distr::Open01;
use rand::Rng;
use rand_distr::Exp1;

use crate::error::{check_beta_open, domain, Error, Result};
use crate::random::ln_stable_unchecked;
use crate::special_fn::gamma_fn;

/// Renewals simulated per count before giving up.
pub const MAX_RENEWALS: u64 = 100_000_000;

/// Law of the i.i.d. waiting times `J_1, J_2, …` between renewals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaitingTimeLaw {
    /// Every wait equals `period`; `N_t = ⌊t / period⌋`.
    Deterministic { period: f64 },
    /// Exponential waits with the given rate (Poisson counts).
    Exponential { rate: f64 },
    /// `P(J > x) = (scale / x)^{tail_index}` for `x >= scale`.
    Pareto { tail_index: f64, scale: f64 },
    /// Waits distributed as the one-sided stable `D(1)`.
    Stable { beta: f64 },
}

impl WaitingTimeLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Deterministic { period } => positive("period", period),
            Self::Exponential { rate } => positive("rate", rate),
            Self::Pareto { tail_index, scale } => {
                check_beta_open(tail_index)
                    .map_err(|_| domain("tail_index", tail_index, "0 < tail_index < 1"))?;
                positive("scale", scale)
            }
            Self::Stable { beta } => check_beta_open(beta),
        }
    }

    /// One waiting time.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Deterministic { period } => period,
            Self::Exponential { rate } => rng.sample::<f64, _>(Exp1) / rate,
            Self::Pareto { tail_index, scale } => {
                let u: f64 = rng.sample(Open01);
                scale * (-u.ln() / tail_index).exp()
            }
            Self::Stable { beta } => ln_stable_unchecked(beta, rng).exp(),
        }
    }

    /// Index `β` of the limiting time change; 1 for light-tailed waits.
    pub fn tail_index(&self) -> f64 {
        match *self {
            Self::Pareto { tail_index, .. } => tail_index,
            Self::Stable { beta } => beta,
            _ => 1.0,
        }
    }

    /// Normalizer `ñ_n` with `N_{nt} / ñ_n ⇒ E(t)` (or `⇒ t` when light-tailed).
    ///
    /// Pareto waits need `ñ_n = n^β / (Γ(1-β) scale^β)` so that the limit
    /// carries the Laplace exponent `s^β` exactly.
    pub fn renewal_scale(&self, n: f64) -> Result<f64> {
        self.validate()?;
        Ok(match *self {
            Self::Deterministic { period } => n / period,
            Self::Exponential { rate } => rate * n,
            Self::Pareto { tail_index, scale } => {
                (n / scale).powf(tail_index) / gamma_fn(1.0 - tail_index)?
            }
            Self::Stable { beta } => n.powf(beta),
        })
    }

    /// The time scale `n` with `ñ_n = k`; inverse of [`renewal_scale`](Self::renewal_scale).
    pub fn time_scale_for(&self, k: f64) -> Result<f64> {
        self.validate()?;
        Ok(match *self {
            Self::Deterministic { period } => k * period,
            Self::Exponential { rate } => k / rate,
            Self::Pareto { tail_index, scale } => {
                scale * (k * gamma_fn(1.0 - tail_index)?).powf(1.0 / tail_index)
            }
            Self::Stable { beta } => k.powf(1.0 / beta),
        })
    }
}

fn positive(param: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(domain(param, value, "finite and > 0"))
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain("t", t, "finite t >= 0"))
    }
}

/// `N_t = max{n : T_n <= t}` for renewal epochs `T_n = J_1 + … + J_n`.
pub fn sample_renewal_count<R: Rng + ?Sized>(
    law: &WaitingTimeLaw,
    t: f64,
    rng: &mut R,
) -> Result<u64> {
    law.validate()?;
    check_time(t)?;
    if let WaitingTimeLaw::Deterministic { period } = *law {
        return Ok((t / period).floor() as u64);
    }
    let mut epoch = 0.0;
    let mut count = 0u64;
    loop {
        epoch += law.sample(rng);
        if epoch > t {
            return Ok(count);
        }
        count += 1;
        if count >= MAX_RENEWALS {
            return Err(Error::Resource(format!(
                "more than {MAX_RENEWALS} renewals before t = {t}"
            )));
        }
    }
}

/// All renewal epochs `T_n <= t_max`, in increasing order.
pub fn renewal_times<R: Rng + ?Sized>(
    law: &WaitingTimeLaw,
    t_max: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    law.validate()?;
    check_time(t_max)?;
    let mut times = Vec::new();
    if let WaitingTimeLaw::Deterministic { period } = *law {
        let n = (t_max / period).floor() as u64;
        times.extend((1..=n).map(|i| period * i as f64));
        return Ok(times);
    }
    let mut epoch = 0.0;
    loop {
        epoch += law.sample(rng);
        if epoch > t_max {
            return Ok(times);
        }
        times.push(epoch);
        if times.len() as u64 >= MAX_RENEWALS {
            return Err(Error::Resource(format!(
                "more than {MAX_RENEWALS} renewals before t = {t_max}"
            )));
        }
    }
}
