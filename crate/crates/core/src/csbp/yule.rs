use rand::Rng;
use rand_distr::Exp1;

use crate::error::{check_beta_closed, domain, Error, Result};
use crate::path::{Interpolation, PathGrid};
use crate::random::InverseStableLaw;
use crate::special_fn::mittag_leffler;

/// Births simulated per Yule path before giving up.
pub const YULE_EVENT_BUDGET: usize = 10_000_000;
/// Largest tolerated ratio `Σ|terms| / |sum|` in the alternating pmf sum.
pub const CANCELLATION_LIMIT: f64 = 1e8;
const MAX_TABLE_LEN: usize = 1 << 24;

fn check_yule(n0: u64, theta: f64) -> Result<()> {
    if n0 < 1 {
        return Err(domain("n0", n0 as f64, "n0 >= 1"));
    }
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(domain("theta", theta, "finite theta > 0"));
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain("t", t, "finite t >= 0"));
    }
    Ok(())
}

/// Birth epochs in `(0, t_max]` of a Yule process from `n0` at rate `θ` per individual.
pub(crate) fn yule_births<R: Rng + ?Sized>(
    n0: u64,
    theta: f64,
    t_max: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let mut births = Vec::new();
    let mut t = 0.0;
    let mut n = n0 as f64;
    loop {
        t += rng.sample::<f64, _>(Exp1) / (theta * n);
        if t > t_max {
            return Ok(births);
        }
        births.push(t);
        n += 1.0;
        if births.len() >= YULE_EVENT_BUDGET {
            return Err(Error::Resource(format!(
                "Yule path exceeded {YULE_EVENT_BUDGET} births before t = {t_max}"
            )));
        }
    }
}

/// Exact event-driven Yule path on `[0, t_max]`.
///
/// The grid holds `0`, every birth epoch and `t_max`; values are read as a
/// step function.
pub fn simulate_yule<R: Rng + ?Sized>(
    n0: u64,
    theta: f64,
    t_max: f64,
    rng: &mut R,
) -> Result<PathGrid> {
    check_yule(n0, theta)?;
    check_time(t_max)?;
    let births = yule_births(n0, theta, t_max, rng)?;
    let mut t_grid = Vec::with_capacity(births.len() + 2);
    t_grid.push(0.0);
    t_grid.extend_from_slice(&births);
    let mut values: Vec<f64> = (0..t_grid.len()).map(|i| (n0 + i as u64) as f64).collect();
    if t_max > *t_grid.last().expect("nonempty") {
        t_grid.push(t_max);
        values.push(*values.last().expect("nonempty"));
    }
    Ok(PathGrid::from_parts_unchecked(
        t_grid,
        values,
        Interpolation::Step,
    ))
}

fn check_pmf_args(n: u64, t: f64, theta: f64, beta: f64) -> Result<()> {
    if n < 1 {
        return Err(domain("n", n as f64, "n >= 1"));
    }
    check_time(t)?;
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(domain("theta", theta, "finite theta > 0"));
    }
    check_beta_closed(beta)
}

fn geometric_pmf(n: u64, q: f64) -> f64 {
    if n == 1 {
        return q;
    }
    // (1 - q)^{n-1} with q = e^{-θt^β}
    q * ((n - 1) as f64 * (-q).ln_1p()).exp()
}

/// `p_β(n, t) = Σ_{j=1}^n C(n-1, j-1) (-1)^{j-1} E_β(-θ j t^β)`, the law of
/// the fractional Yule process started from one individual.
///
/// Summed with Neumaier compensation. When the terms cancel by more than
/// [`CANCELLATION_LIMIT`] the result is refused with [`Error::Accuracy`];
/// [`yule_fractional_pmf_quadrature`] covers that range. `β = 1` uses the
/// geometric closed form.
pub fn yule_fractional_pmf(n: u64, t: f64, theta: f64, beta: f64) -> Result<f64> {
    check_pmf_args(n, t, theta, beta)?;
    if t == 0.0 {
        return Ok(if n == 1 { 1.0 } else { 0.0 });
    }
    let x = theta * t.powf(beta);
    if beta == 1.0 {
        return Ok(geometric_pmf(n, (-x).exp()));
    }
    let mut binom = 1.0;
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut abs_sum = 0.0;
    for j in 1..=n {
        if j > 1 {
            binom *= (n - j + 1) as f64 / (j - 1) as f64;
        }
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * binom * mittag_leffler(beta, -x * j as f64)?;
        abs_sum += term.abs();
        let s = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - s) + term
        } else {
            (term - s) + sum
        };
        sum = s;
    }
    let value = sum + comp;
    let ratio = abs_sum / value.abs();
    if !(ratio <= CANCELLATION_LIMIT) {
        return Err(Error::Accuracy { n, ratio });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// The fractional Yule pmf as a mixture over the inverse subordinator:
/// `p_β(n, t) = E[e^{-θE(t)} (1 - e^{-θE(t)})^{n-1}]`.
///
/// The density of `E(t)` is tabulated once, so any `n` costs one pass over
/// the table and never suffers from cancellation.
#[derive(Debug, Clone)]
pub struct YuleMixturePmf {
    theta: f64,
    t: f64,
    beta: f64,
    law: Option<InverseStableLaw>,
}

impl YuleMixturePmf {
    pub fn new(t: f64, theta: f64, beta: f64) -> Result<Self> {
        check_pmf_args(1, t, theta, beta)?;
        let law = if beta < 1.0 && t > 0.0 {
            Some(InverseStableLaw::new(beta, t)?)
        } else {
            None
        };
        Ok(Self {
            theta,
            t,
            beta,
            law,
        })
    }

    pub fn pmf(&self, n: u64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        match &self.law {
            None if self.t == 0.0 => f64::from(n == 1),
            None => geometric_pmf(n, (-self.theta * self.t).exp()),
            Some(law) => law.expect(|u| {
                let q = (-self.theta * u).exp();
                geometric_pmf(n, q)
            }),
        }
    }

    /// `p(1), …, p(n_max)`.
    pub fn table(&self, n_max: usize) -> Vec<f64> {
        let Some(law) = &self.law else {
            return (1..=n_max as u64).map(|n| self.pmf(n)).collect();
        };
        let mut out = vec![0.0; n_max];
        let theta = self.theta;
        law_weighted_table(law, theta, &mut out);
        out
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

fn law_weighted_table(law: &InverseStableLaw, theta: f64, out: &mut [f64]) {
    for &(u, wh) in law.density_rule() {
        let q = (-theta * u).exp();
        let r = -(-theta * u).exp_m1();
        let mut p = wh * q;
        for a in out.iter_mut() {
            *a += p;
            p *= r;
            if p == 0.0 {
                break;
            }
        }
    }
}

/// `p_β(n, t)` by the mixture route; accurate for every `n`.
pub fn yule_fractional_pmf_quadrature(n: u64, t: f64, theta: f64, beta: f64) -> Result<f64> {
    check_pmf_args(n, t, theta, beta)?;
    Ok(YuleMixturePmf::new(t, theta, beta)?.pmf(n))
}

/// `p_β(1, t), …, p_β(n_max, t)`: the alternating sum while it is accurate,
/// the mixture route from the first `n` where it is not.
pub fn yule_pmf_upto(n_max: usize, t: f64, theta: f64, beta: f64) -> Result<Vec<f64>> {
    check_pmf_args(1, t, theta, beta)?;
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max as u64 {
        match yule_fractional_pmf(n, t, theta, beta) {
            Ok(p) => out.push(p),
            Err(Error::Accuracy { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    if out.len() < n_max {
        let table = YuleMixturePmf::new(t, theta, beta)?.table(n_max);
        let start = out.len();
        out.extend_from_slice(&table[start..]);
    }
    Ok(out)
}

/// Shortest pmf prefix `p(1..=N)` whose sum reaches `1 - mass_tol`.
pub fn yule_pmf_until_mass(t: f64, theta: f64, beta: f64, mass_tol: f64) -> Result<Vec<f64>> {
    if !(mass_tol > 0.0 && mass_tol < 1.0) {
        return Err(domain("mass_tol", mass_tol, "0 < mass_tol < 1"));
    }
    let mut len = 64;
    loop {
        let table = yule_pmf_upto(len, t, theta, beta)?;
        let mut acc = 0.0;
        if let Some(cut) = table.iter().position(|p| {
            acc += p;
            acc >= 1.0 - mass_tol
        }) {
            let mut table = table;
            table.truncate(cut + 1);
            return Ok(table);
        }
        if len >= MAX_TABLE_LEN {
            return Err(Error::Resource(format!(
                "pmf mass stays below 1 - {mass_tol} up to n = {len}"
            )));
        }
        len *= 4;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::RngStream;

    #[test]
    fn no_births_for_tiny_rate() {
        let mut rng = RngStream::new(1, 0);
        let p = simulate_yule(3, 1e-12, 1.0, &mut rng).unwrap();
        assert_eq!(p.values(), &[3.0, 3.0]);
        assert_eq!(p.value_at(0.5), Some(3.0));
    }

    #[test]
    fn unit_steps() {
        let mut rng = RngStream::new(2, 0);
        let p = simulate_yule(1, 1.0, 3.0, &mut rng).unwrap();
        assert!(p.values().windows(2).all(|w| w[1] - w[0] <= 1.0));
        assert_eq!(*p.t_grid().last().unwrap(), 3.0);
    }

    #[test]
    fn pmf_special_cases() {
        assert_eq!(yule_fractional_pmf(1, 0.0, 1.0, 0.6).unwrap(), 1.0);
        assert_eq!(yule_fractional_pmf(4, 0.0, 1.0, 0.6).unwrap(), 0.0);
        let e = (-1f64).exp();
        let p3 = yule_fractional_pmf(3, 1.0, 1.0, 1.0).unwrap();
        assert!((p3 - 0.146_995_943_066_080_88).abs() < 1e-15);
        assert!((p3 - e * (1.0 - e).powi(2)).abs() < 1e-15);
        let p1 = yule_fractional_pmf(1, 2.0, 0.5, 0.5).unwrap();
        let ml = mittag_leffler(0.5, -0.5 * 2f64.sqrt()).unwrap();
        assert_eq!(p1, ml);
        assert!(yule_fractional_pmf(0, 1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn routes_agree() {
        let mix = YuleMixturePmf::new(1.0, 1.0, 0.6).unwrap();
        let table = mix.table(12);
        for n in 1..=12u64 {
            let alt = yule_fractional_pmf(n, 1.0, 1.0, 0.6).unwrap();
            assert!((alt - mix.pmf(n)).abs() < 1e-11, "n {n}");
            assert!((table[n as usize - 1] - mix.pmf(n)).abs() < 1e-14);
        }
    }

    #[test]
    fn guard_trips_for_large_n() {
        match yule_fractional_pmf(200, 1.0, 1.0, 0.6) {
            Err(Error::Accuracy { n, ratio }) => {
                assert_eq!(n, 200);
                assert!(ratio > CANCELLATION_LIMIT);
            }
            other => panic!("expected accuracy error, got {other:?}"),
        }
        assert!(yule_fractional_pmf_quadrature(200, 1.0, 1.0, 0.6).unwrap() > 0.0);
    }

    #[test]
    fn mass_cutoff() {
        let pmf = yule_pmf_until_mass(1.0, 1.0, 0.6, 1e-6).unwrap();
        let total: f64 = pmf.iter().sum();
        assert!(total >= 1.0 - 1e-6);
        assert!(total - pmf.last().unwrap() < 1.0 - 1e-6);
        assert!(pmf.iter().all(|&p| (0.0..=1.0).contains(&p)));
    }
}
