use rand::{Rng, RngCore};

use crate::csbp::feller::{check_feller, euler_feller, DEFAULT_FELLER_STEP};
use crate::csbp::yule::yule_births;
use crate::error::{check_beta_closed, domain, Error, Result};
use crate::path::{Interpolation, PathGrid};
use crate::random::{inverse_marginal_unchecked, ln_stable_unchecked, RngStream};
use crate::special_fn::check_time_grid;

/// Quantile of `E(t_max)` used as the operational horizon.
pub const HORIZON_QUANTILE: f64 = 0.999;
/// Marginal draws used to estimate the horizon quantile.
pub const HORIZON_SAMPLES: usize = 10_000;

/// The process run in operational time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InnerProcess {
    /// Feller diffusion `dX = -bX dt + √(2cX) dW` from `x0`.
    Feller { x0: f64, b: f64, c: f64 },
    /// Yule process from `n0` individuals, birth rate `θ` each.
    Yule { n0: u64, theta: f64 },
}

/// An inner process composed with an independent inverse `β`-stable
/// subordinator; `β = 1` means no time change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcProcessSpec {
    inner: InnerProcess,
    beta: f64,
}

impl TcProcessSpec {
    pub fn new(inner: InnerProcess, beta: f64) -> Result<Self> {
        check_beta_closed(beta)?;
        match inner {
            InnerProcess::Feller { x0, b, c } => check_feller(x0, b, c)?,
            InnerProcess::Yule { n0, theta } => {
                if n0 < 1 {
                    return Err(domain("n0", n0 as f64, "n0 >= 1"));
                }
                if !(theta > 0.0) || !theta.is_finite() {
                    return Err(domain("theta", theta, "finite theta > 0"));
                }
            }
        }
        Ok(Self { inner, beta })
    }

    pub fn inner(&self) -> InnerProcess {
        self.inner
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// A sampling plan for `X(E(t))` on `[0, t_max]`.
///
/// Planning fixes the operational grid step and a horizon from the
/// [`HORIZON_QUANTILE`] of `E(t_max)`; each [`sample`](Self::sample) then
/// draws one subordinator path and one inner path. The subordinator is
/// extended lazily until it passes `t_max`; if that takes more than the
/// horizon, the horizon is doubled once before failing with
/// [`Error::Censored`].
#[derive(Debug, Clone, PartialEq)]
pub struct TimeChange {
    spec: TcProcessSpec,
    t_max: f64,
    step: f64,
    horizon_steps: usize,
}

impl TimeChange {
    pub fn plan(spec: TcProcessSpec, t_max: f64, step: f64, rng: &mut RngStream) -> Result<Self> {
        if !(t_max >= 0.0) || !t_max.is_finite() {
            return Err(domain("t_max", t_max, "finite t_max >= 0"));
        }
        if !(step > 0.0) || !step.is_finite() {
            return Err(domain("step", step, "finite step > 0"));
        }
        let u_max = if spec.beta == 1.0 {
            t_max
        } else {
            let mut r = RngStream::new(rng.next_u64(), rng.next_u64());
            let mut draws: Vec<f64> = (0..HORIZON_SAMPLES)
                .map(|_| inverse_marginal_unchecked(spec.beta, t_max, &mut r))
                .collect();
            draws.sort_by(f64::total_cmp);
            let idx = ((HORIZON_QUANTILE * HORIZON_SAMPLES as f64).ceil() as usize).max(1) - 1;
            draws[idx]
        };
        let horizon_steps = ((u_max / step).ceil() as usize).max(1);
        Ok(Self {
            spec,
            t_max,
            step,
            horizon_steps,
        })
    }

    pub fn spec(&self) -> &TcProcessSpec {
        &self.spec
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Operational horizon before the one-time extension.
    pub fn horizon(&self) -> f64 {
        self.horizon_steps as f64 * self.step
    }

    /// One path of `X(E(t))` on `t_grid ⊂ [0, t_max]`.
    pub fn sample<R: Rng + ?Sized>(&self, t_grid: &[f64], rng: &mut R) -> Result<PathGrid> {
        check_time_grid(t_grid)?;
        let Some(&t_last) = t_grid.last() else {
            return Err(Error::Precondition("t_grid is empty".into()));
        };
        if t_last > self.t_max {
            return Err(Error::Precondition(format!(
                "t_grid reaches {t_last} beyond the planned t_max = {}",
                self.t_max
            )));
        }
        if self.spec.beta == 1.0 {
            return self.sample_untimed(t_grid, rng);
        }
        let idx = self.passage_indices(t_grid, rng)?;
        let max_idx = *idx.iter().max().expect("nonempty grid");
        let values: Vec<f64> = match self.spec.inner {
            InnerProcess::Feller { x0, b, c } => {
                let x = euler_feller(x0, b, c, self.step, max_idx, rng);
                idx.iter().map(|&i| x[i]).collect()
            }
            InnerProcess::Yule { n0, theta } => {
                let births = yule_births(n0, theta, max_idx as f64 * self.step, rng)?;
                idx.iter()
                    .map(|&i| {
                        let u = i as f64 * self.step;
                        (n0 + births.partition_point(|&s| s <= u) as u64) as f64
                    })
                    .collect()
            }
        };
        let interpolation = match self.spec.inner {
            InnerProcess::Feller { .. } => Interpolation::Linear,
            InnerProcess::Yule { .. } => Interpolation::Step,
        };
        Ok(PathGrid::from_parts_unchecked(
            t_grid.to_vec(),
            values,
            interpolation,
        ))
    }

    // Grid index of E(t) = inf{u : D(u) > t} for each t.
    fn passage_indices<R: Rng + ?Sized>(&self, t_grid: &[f64], rng: &mut R) -> Result<Vec<usize>> {
        let beta = self.spec.beta;
        let t_last = *t_grid.last().expect("nonempty grid");
        let ln_scale = self.step.ln() / beta;
        let mut cap = self.horizon_steps;
        let mut extended = false;
        let mut d = Vec::with_capacity(cap + 1);
        d.push(0.0);
        let mut reached = 0.0;
        while reached <= t_last {
            if d.len() > cap {
                if extended {
                    let t = t_grid
                        .iter()
                        .copied()
                        .find(|&t| t >= reached)
                        .unwrap_or(t_last);
                    return Err(Error::Censored { t, reached });
                }
                cap *= 2;
                extended = true;
            }
            reached += (ln_scale + ln_stable_unchecked(beta, rng)).exp();
            d.push(reached);
        }
        Ok(t_grid
            .iter()
            .map(|&t| d.partition_point(|&x| x <= t))
            .collect())
    }

    fn sample_untimed<R: Rng + ?Sized>(&self, t_grid: &[f64], rng: &mut R) -> Result<PathGrid> {
        let t_last = *t_grid.last().expect("nonempty grid");
        match self.spec.inner {
            InnerProcess::Feller { x0, b, c } => {
                let index = |t: f64| (t / self.step).round() as usize;
                let x = euler_feller(x0, b, c, self.step, index(t_last), rng);
                let values = t_grid.iter().map(|&t| x[index(t)]).collect();
                Ok(PathGrid::from_parts_unchecked(
                    t_grid.to_vec(),
                    values,
                    Interpolation::Linear,
                ))
            }
            InnerProcess::Yule { n0, theta } => {
                let births = yule_births(n0, theta, t_last, rng)?;
                let values = t_grid
                    .iter()
                    .map(|&t| (n0 + births.partition_point(|&s| s <= t) as u64) as f64)
                    .collect();
                Ok(PathGrid::from_parts_unchecked(
                    t_grid.to_vec(),
                    values,
                    Interpolation::Step,
                ))
            }
        }
    }
}

/// `X(E(t))` on `t_grid` with the default operational step.
///
/// Plans a fresh horizon on every call; for many replicates plan one
/// [`TimeChange`] and call [`TimeChange::sample`] instead.
pub fn compose_time_change(
    spec: &TcProcessSpec,
    t_grid: &[f64],
    rng: &mut RngStream,
) -> Result<PathGrid> {
    check_time_grid(t_grid)?;
    let t_max = t_grid.last().copied().unwrap_or(0.0);
    TimeChange::plan(*spec, t_max, DEFAULT_FELLER_STEP, rng)?.sample(t_grid, rng)
}
