//! Named verification bundles.

use clap::ValueEnum;

use crate::csbp::{
    tc_mean, tc_second_moment, yule_pmf_until_mass, BranchingMechanism, InnerProcess,
    TcProcessSpec, TimeChange, DEFAULT_FELLER_STEP,
};
use crate::error::Result;
use crate::gw::{branching_inequality_experiment, OffspringLaw};
use crate::mc::{
    chi_square_critical, chi_square_gof, estimate, par_replicates, OffspringFamily,
    ScalingExperiment,
};
use crate::random::{RngStream, WaitingTimeLaw};

/// What `verify` checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Moments,
    BranchingInequality,
    Yule,
    Scaling,
}

/// Pinned parameter bundles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    FellerSub,
    FellerSuper,
    YuleFrac,
    GwInequality,
    Scaling,
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Self::FellerSub => "feller-sub",
            Self::FellerSuper => "feller-super",
            Self::YuleFrac => "yule-frac",
            Self::GwInequality => "gw-inequality",
            Self::Scaling => "scaling",
        }
    }

    pub fn default_for(kind: VerifyKind) -> Self {
        match kind {
            VerifyKind::Moments => Self::FellerSub,
            VerifyKind::BranchingInequality => Self::GwInequality,
            VerifyKind::Yule => Self::YuleFrac,
            VerifyKind::Scaling => Self::Scaling,
        }
    }

    pub fn applies_to(&self, kind: VerifyKind) -> bool {
        matches!(
            (kind, self),
            (VerifyKind::Moments, Self::FellerSub | Self::FellerSuper)
                | (VerifyKind::BranchingInequality, Self::GwInequality)
                | (VerifyKind::Yule, Self::YuleFrac)
                | (VerifyKind::Scaling, Self::Scaling)
        )
    }

    pub fn default_n_rep(&self) -> usize {
        match self {
            Self::Scaling => 10_000,
            _ => 100_000,
        }
    }
}

/// One line of a verification table.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub check: String,
    pub estimate: f64,
    pub target: f64,
    pub std_error: f64,
    pub pass: bool,
}

/// Parameters of the branching-inequality sweep.
pub const INEQUALITY_BETAS: [f64; 3] = [0.4, 0.6, 0.8];
pub const INEQUALITY_LAMBDAS: [f64; 3] = [0.5, 1.0, 2.0];
pub const INEQUALITY_T: f64 = 2.0;
pub const INEQUALITY_PARETO_SCALE: f64 = 0.1;

/// Offspring law of the inequality sweep: mean 1.3.
pub fn inequality_law() -> OffspringLaw {
    OffspringLaw::from_pairs(&[(1, 0.7), (2, 0.3)]).expect("valid pmf")
}

/// Runs every check of `preset`.
pub fn run_preset(preset: Preset, seed: u64, n_rep: Option<usize>) -> Result<Vec<CheckRow>> {
    let n_rep = n_rep.unwrap_or(preset.default_n_rep());
    let mut rng = RngStream::new(seed, 0);
    match preset {
        Preset::FellerSub => {
            let mut rows = feller_moment_checks(1.0, 1.0, 1.0, 0.5, 1.0, n_rep, &mut rng)?;
            let critical = feller_moment_checks(1.0, 0.0, 0.5, 0.7, 1.0, n_rep, &mut rng)?;
            rows.extend(
                critical
                    .into_iter()
                    .filter(|r| r.check.starts_with("second")),
            );
            Ok(rows)
        }
        Preset::FellerSuper => feller_moment_checks(1.0, -0.5, 0.5, 0.7, 1.0, n_rep, &mut rng),
        Preset::YuleFrac => yule_checks(1.0, 0.6, 1.0, n_rep, &mut rng),
        Preset::GwInequality => inequality_checks(n_rep, &mut rng),
        Preset::Scaling => scaling_checks(n_rep, &mut rng),
    }
}

/// Euler discretization allowance added to `3 SE` for the mean check.
pub const MEAN_ALLOWANCE: f64 = 0.01;
/// Same for the second moment.
pub const SECOND_MOMENT_ALLOWANCE: f64 = 0.02;

fn feller_moment_checks(
    x0: f64,
    b: f64,
    c: f64,
    beta: f64,
    t: f64,
    n_rep: usize,
    rng: &mut RngStream,
) -> Result<Vec<CheckRow>> {
    let spec = TcProcessSpec::new(InnerProcess::Feller { x0, b, c }, beta)?;
    let plan = TimeChange::plan(spec, t, DEFAULT_FELLER_STEP, rng)?;
    let grid = [t];
    let xs = par_replicates(rng, n_rep, |r| Ok(plan.sample(&grid, r)?.values()[0]))?;
    let squares: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let mech = BranchingMechanism::feller(b, c)?;
    let m1 = estimate(&xs)?;
    let m2 = estimate(&squares)?;
    let t1 = tc_mean(&mech, x0, t, beta)?;
    let t2 = tc_second_moment(&mech, x0, t, beta)?;
    let tag = format!("[x={x0},b={b},c={c},beta={beta},t={t}]");
    Ok(vec![
        CheckRow {
            check: format!("mean{tag}"),
            estimate: m1.mean,
            target: t1,
            std_error: m1.std_error,
            pass: m1.within(t1, 3.0, MEAN_ALLOWANCE),
        },
        CheckRow {
            check: format!("second_moment{tag}"),
            estimate: m2.mean,
            target: t2,
            std_error: m2.std_error,
            pass: m2.within(t2, 3.0, SECOND_MOMENT_ALLOWANCE),
        },
    ])
}

fn yule_checks(
    theta: f64,
    beta: f64,
    t: f64,
    n_rep: usize,
    rng: &mut RngStream,
) -> Result<Vec<CheckRow>> {
    let spec = TcProcessSpec::new(InnerProcess::Yule { n0: 1, theta }, beta)?;
    let plan = TimeChange::plan(spec, t, DEFAULT_FELLER_STEP, rng)?;
    let grid = [t];
    let ns = par_replicates(
        rng,
        n_rep,
        |r| Ok(plan.sample(&grid, r)?.values()[0] as u64),
    )?;
    let pmf = yule_pmf_until_mass(t, theta, beta, 1e-6)?;
    let mass: f64 = pmf.iter().sum();
    let (counts, probs) = pmf_cells(&ns, &pmf);
    let gof = chi_square_gof(&counts, &probs)?;
    let critical = chi_square_critical(gof.df.max(1), 0.01)?;
    let tag = format!("[theta={theta},beta={beta},t={t}]");
    Ok(vec![
        CheckRow {
            check: format!("chi_square_gof{tag}"),
            estimate: gof.statistic,
            target: critical,
            std_error: f64::NAN,
            pass: gof.passes(0.01)?,
        },
        CheckRow {
            check: format!("pmf_partial_sum{tag}"),
            estimate: mass,
            target: 1.0 - 1e-6,
            std_error: f64::NAN,
            pass: mass >= 1.0 - 1e-6,
        },
    ])
}

/// Counts of `samples` in cells `1..=N` plus a tail cell, against `pmf[n-1]`
/// and the leftover mass.
pub fn pmf_cells(samples: &[u64], pmf: &[f64]) -> (Vec<u64>, Vec<f64>) {
    let n = pmf.len();
    let mut counts = vec![0u64; n + 1];
    for &s in samples {
        let idx = if s >= 1 && (s as usize) <= n {
            s as usize - 1
        } else {
            n
        };
        counts[idx] += 1;
    }
    let mut probs = pmf.to_vec();
    probs.push((1.0 - pmf.iter().sum::<f64>()).max(0.0));
    (counts, probs)
}

fn inequality_checks(n_rep: usize, rng: &mut RngStream) -> Result<Vec<CheckRow>> {
    let law = inequality_law();
    let mut rows = Vec::new();
    let mut headline = None;
    for &beta in &INEQUALITY_BETAS {
        for &lambda in &INEQUALITY_LAMBDAS {
            let wait = WaitingTimeLaw::Pareto {
                tail_index: beta,
                scale: INEQUALITY_PARETO_SCALE,
            };
            let k = branching_inequality_experiment(
                1,
                1,
                lambda,
                INEQUALITY_T,
                &law,
                &wait,
                n_rep,
                rng,
            )?;
            if beta == 0.6 && lambda == 1.0 {
                headline = Some(k);
            }
            rows.push(CheckRow {
                check: format!("K_nonnegative[beta={beta},lambda={lambda},t={INEQUALITY_T}]"),
                estimate: k.mean,
                target: 0.0,
                std_error: k.std_error,
                pass: k.mean >= -3.0 * k.std_error,
            });
        }
    }
    let k = headline.expect("sweep contains beta=0.6, lambda=1");
    rows.push(CheckRow {
        check: format!("K_positive[beta=0.6,lambda=1,t={INEQUALITY_T}]"),
        estimate: k.mean,
        target: 0.0,
        std_error: k.std_error,
        pass: k.mean > 3.0 * k.std_error,
    });
    Ok(rows)
}

/// Levels of the scaling-limit runs.
pub const SCALING_LEVELS: [u64; 3] = [50, 200, 800];

/// The fractional (`beta = 0.6`, Pareto waits) and control (`beta = 1`,
/// unit waits) scaling experiments.
pub fn scaling_experiments(n_rep: usize) -> (ScalingExperiment, ScalingExperiment) {
    let family = OffspringFamily::FellerLimit { b: 0.0, c: 0.5 };
    let base = ScalingExperiment {
        family,
        wait: WaitingTimeLaw::Deterministic { period: 1.0 },
        beta: 1.0,
        x0: 1.0,
        t: 1.0,
        levels: SCALING_LEVELS.to_vec(),
        n_rep,
    };
    let fractional = ScalingExperiment {
        wait: WaitingTimeLaw::Pareto {
            tail_index: 0.6,
            scale: 1.0,
        },
        beta: 0.6,
        ..base.clone()
    };
    (fractional, base)
}

fn scaling_checks(n_rep: usize, rng: &mut RngStream) -> Result<Vec<CheckRow>> {
    let (fractional, control) = scaling_experiments(n_rep);
    let mut rows = Vec::new();
    for (name, exp, bound) in [
        ("control", &control, 0.05),
        ("fractional", &fractional, 0.08),
    ] {
        let report = exp.run(rng)?;
        let slack = 2.0 * report.noise();
        let mut prev: Option<f64> = None;
        for (&level, &d) in report.levels.iter().zip(&report.ks_distances) {
            let target = prev.map_or(f64::NAN, |p| p + slack);
            rows.push(CheckRow {
                check: format!("ks_{name}[beta={},k={level}]", exp.beta),
                estimate: d,
                target,
                std_error: report.noise(),
                pass: prev.is_none_or(|p| d <= p + slack),
            });
            prev = Some(d);
        }
        let d = report.final_distance();
        rows.push(CheckRow {
            check: format!("ks_{name}_final[beta={}]", exp.beta),
            estimate: d,
            target: bound,
            std_error: report.noise(),
            pass: d < bound,
        });
    }
    Ok(rows)
}
