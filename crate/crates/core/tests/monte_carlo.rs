//! Monte Carlo checks of the samplers against closed-form targets.
//!
//! Every check uses a fixed stream, so results are deterministic. Tolerances
//! are three standard errors unless a discretization allowance is stated.

use fracbranch::csbp::{
    compose_time_change, simulate_feller, simulate_yule, InnerProcess, TcProcessSpec, TimeChange,
};
use fracbranch::gw::{gw_final, gw_step, OffspringLaw};
use fracbranch::mc::{chi_square_two_sample, estimate, ks_two_sample, par_replicates};
use fracbranch::random::{
    sample_inverse_marginal, sample_one_sided_stable, sample_renewal_count,
    sample_subordinator_path, WaitingTimeLaw,
};
use fracbranch::special_fn::{gamma_fn, mittag_leffler, GridFunction};
use fracbranch::RngStream;

const E_INV: f64 = 0.367_879_441_171_442_3;

fn mean_of<F>(seed: u64, n: usize, f: F) -> fracbranch::McEstimate
where
    F: Fn(&mut RngStream) -> fracbranch::Result<f64> + Sync,
{
    let xs = par_replicates(&mut RngStream::new(seed, 0), n, f).unwrap();
    estimate(&xs).unwrap()
}

#[test]
fn stable_laplace_transform_at_one() {
    let est = mean_of(
        1,
        100_000,
        |r| Ok((-sample_one_sided_stable(0.7, r)?).exp()),
    );
    assert!(est.within(E_INV, 3.0, 0.0), "{est:?}");
}

#[test]
fn levy_median() {
    let mut rng = RngStream::new(2, 0);
    let mut xs: Vec<f64> = (0..1_000_000)
        .map(|_| sample_one_sided_stable(0.5, &mut rng).unwrap())
        .collect();
    let mid = xs.len() / 2;
    let (_, m, _) = xs.select_nth_unstable_by(mid, f64::total_cmp);
    // erfc(1 / (2√m)) = 1/2
    let exact = 1.099_054_669_158_866;
    assert!((*m / exact - 1.0).abs() < 0.01, "median {m}");
}

#[test]
fn inverse_marginal_moments() {
    let xs = par_replicates(&mut RngStream::new(3, 0), 100_000, |r| {
        sample_inverse_marginal(0.7, 1.0, r)
    })
    .unwrap();
    let m1 = estimate(&xs).unwrap();
    assert!(m1.within(1.0 / gamma_fn(1.7).unwrap(), 3.0, 0.0), "{m1:?}");
    let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let m2 = estimate(&sq).unwrap();
    assert!(m2.within(2.0 / gamma_fn(2.4).unwrap(), 3.0, 0.0), "{m2:?}");
}

#[test]
fn inverse_marginal_laplace_transform() {
    // E[exp(-λ E(t))] = E_β(-λ t^β) = e^2 erfc(√2) at β = 1/2, t = 2, λ = 1
    let target = mittag_leffler(0.5, -(2f64).sqrt()).unwrap();
    assert!((target - 0.336_204_002_446_341_2).abs() < 1e-13);
    let est = mean_of(4, 100_000, |r| {
        Ok((-sample_inverse_marginal(0.5, 2.0, r)?).exp())
    });
    assert!(est.within(target, 3.0, 0.0), "{est:?}");
}

#[test]
fn subordinator_endpoint_laplace_transform() {
    let est = mean_of(5, 10_000, |r| {
        let p = sample_subordinator_path(0.6, 1.0, 16, r)?;
        Ok((-p.d_values()[16]).exp())
    });
    assert!(est.within(E_INV, 3.0, 0.0), "{est:?}");
}

#[test]
fn poisson_renewal_mean() {
    let law = WaitingTimeLaw::Exponential { rate: 2.0 };
    let est = mean_of(6, 100_000, |r| {
        Ok(sample_renewal_count(&law, 3.0, r)? as f64)
    });
    assert!(est.within(6.0, 3.0, 0.0), "{est:?}");
}

#[test]
fn heavy_tailed_renewals_approach_inverse_subordinator() {
    let beta = 0.6;
    let n_rep = 10_000;
    let reference = par_replicates(&mut RngStream::new(7, 0), n_rep, |r| {
        sample_inverse_marginal(beta, 1.0, r)
    })
    .unwrap();
    let noise = (2.0 / n_rep as f64).sqrt();
    for (id, law) in [
        WaitingTimeLaw::Pareto {
            tail_index: beta,
            scale: 1.0,
        },
        WaitingTimeLaw::Stable { beta },
    ]
    .into_iter()
    .enumerate()
    {
        let mut distances = Vec::new();
        for n in [1e2, 1e3, 1e4] {
            let scale = law.renewal_scale(n).unwrap();
            let xs = par_replicates(&mut RngStream::new(8, id as u64), n_rep, |r| {
                Ok(sample_renewal_count(&law, n, r)? as f64 / scale)
            })
            .unwrap();
            distances.push(ks_two_sample(&xs, &reference).unwrap());
        }
        assert!(
            distances.windows(2).all(|w| w[1] <= w[0] + 2.0 * noise),
            "{law:?}: {distances:?}"
        );
        assert!(distances[2] < 3.0 * noise, "{law:?}: {distances:?}");
    }
}

#[test]
fn gw_step_mean() {
    let law = OffspringLaw::new(vec![0.1, 0.3, 0.6]).unwrap();
    let est = mean_of(9, 100_000, |r| Ok(gw_step(10, &law, r)? as f64));
    assert!(est.within(15.0, 3.0, 0.0), "{est:?}");
}

#[test]
fn subcritical_extinction() {
    let law = OffspringLaw::new(vec![0.6, 0.3, 0.1]).unwrap();
    let dead = par_replicates(&mut RngStream::new(10, 0), 10_000, |r| {
        Ok(gw_final(1, &law, 30, r)? == 0)
    })
    .unwrap();
    let frac = dead.iter().filter(|&&d| d).count() as f64 / dead.len() as f64;
    assert!(frac >= 0.99, "{frac}");
}

#[test]
fn gw_mean_growth() {
    for (i, pmf) in [
        vec![0.6, 0.3, 0.1],
        vec![0.25, 0.5, 0.25],
        vec![0.1, 0.3, 0.6],
    ]
    .into_iter()
    .enumerate()
    {
        let law = OffspringLaw::new(pmf).unwrap();
        let m = law.mean();
        for n in [1u64, 5, 10] {
            let est = mean_of(11 + i as u64, 20_000, |r| {
                Ok(gw_final(2, &law, n, r)? as f64)
            });
            let target = 2.0 * m.powi(n as i32);
            assert!(
                est.within(target, 3.0, 0.0),
                "m={m}, n={n}: {est:?} vs {target}"
            );
        }
    }
}

#[test]
fn branching_property_at_fixed_generation() {
    let law = OffspringLaw::new(vec![0.3, 0.4, 0.2, 0.1]).unwrap();
    let n_rep = 100_000;
    let joint = par_replicates(&mut RngStream::new(20, 0), n_rep, |r| {
        gw_final(2, &law, 3, r)
    })
    .unwrap();
    let split = par_replicates(&mut RngStream::new(21, 0), n_rep, |r| {
        Ok(gw_final(1, &law, 3, r)? + gw_final(1, &law, 3, r)?)
    })
    .unwrap();
    let top = joint.iter().chain(&split).copied().max().unwrap() as usize;
    let mut a = vec![0u64; top + 1];
    let mut b = vec![0u64; top + 1];
    joint.iter().for_each(|&z| a[z as usize] += 1);
    split.iter().for_each(|&z| b[z as usize] += 1);
    let test = chi_square_two_sample(&a, &b).unwrap();
    assert!(test.passes(0.01).unwrap(), "{test:?}");
}

#[test]
fn feller_moments() {
    // the grid step is the Euler step
    let grid = GridFunction::uniform_grid(0.0, 1.0, 1000);
    let est = mean_of(30, 100_000, |r| {
        Ok(simulate_feller(1.0, 1.0, 1.0, &grid, r)?.values()[1000])
    });
    assert!(est.within(E_INV, 3.0, 0.005), "{est:?}");
    let est = mean_of(31, 100_000, |r| {
        let x = simulate_feller(1.0, 0.0, 0.5, &grid, r)?.values()[1000];
        Ok(x * x)
    });
    assert!(est.within(2.0, 3.0, 0.01), "{est:?}");
}

#[test]
fn yule_mean() {
    let est = mean_of(32, 100_000, |r| {
        Ok(simulate_yule(1, 1.0, 1.0, r)?.value_at(1.0).unwrap())
    });
    assert!(est.within(std::f64::consts::E, 3.0, 0.0), "{est:?}");
}

#[test]
fn beta_one_time_change_keeps_the_inner_law() {
    let spec = TcProcessSpec::new(InnerProcess::Yule { n0: 1, theta: 1.0 }, 1.0).unwrap();
    let n_rep = 100_000;
    let grid = [0.0, 1.0];
    let composed = par_replicates(&mut RngStream::new(40, 0), n_rep, |r| {
        Ok(compose_time_change(&spec, &grid, r)?.values()[1])
    })
    .unwrap();
    let direct = par_replicates(&mut RngStream::new(41, 0), n_rep, |r| {
        Ok(simulate_yule(1, 1.0, 1.0, r)?.value_at(1.0).unwrap())
    })
    .unwrap();
    let d = ks_two_sample(&composed, &direct).unwrap();
    assert!(d < 0.01, "KS {d}");
}

#[test]
fn time_changed_feller_mean_small_run() {
    let spec = TcProcessSpec::new(
        InnerProcess::Feller {
            x0: 1.0,
            b: 1.0,
            c: 1.0,
        },
        0.5,
    )
    .unwrap();
    let mut rng = RngStream::new(50, 0);
    let plan = TimeChange::plan(spec, 1.0, 1e-3, &mut rng).unwrap();
    let grid = [0.0, 1.0];
    let xs = par_replicates(&mut rng, 20_000, |r| Ok(plan.sample(&grid, r)?.values()[1])).unwrap();
    let est = estimate(&xs).unwrap();
    let target = mittag_leffler(0.5, -1.0).unwrap();
    assert!(est.within(target, 3.0, 0.01), "{est:?} vs {target}");
}
