//! Continuous-state branching: mechanisms, the Laplace-exponent ODE, plain
//! and time-changed moment formulas, Feller and Yule path simulation,
//! time-change composition and the fractional Yule pmf.

mod exponent;
mod feller;
mod gap;
mod timechange;
mod yule;

pub use exponent::{solve_exponent, EXPONENT_ATOL};
pub use feller::{simulate_feller, DEFAULT_FELLER_STEP};
pub use gap::tc_branching_gap;
pub use timechange::{
    compose_time_change, InnerProcess, TcProcessSpec, TimeChange, HORIZON_QUANTILE, HORIZON_SAMPLES,
};
pub use yule::{
    simulate_yule, yule_fractional_pmf, yule_fractional_pmf_quadrature, yule_pmf_until_mass,
    yule_pmf_upto, YuleMixturePmf, CANCELLATION_LIMIT, YULE_EVENT_BUDGET,
};

use crate::error::{check_beta_closed, domain, Error, Result};
use crate::special_fn::{gamma_fn, mittag_leffler};

/// `ψ(u) = bu + cu² + Σ w_i (e^{-z_i u} - 1 + z_i u)` with a finite atomic
/// jump measure.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchingMechanism {
    b: f64,
    c: f64,
    jumps: Vec<(f64, f64)>,
}

/// Sign of the drift `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criticality {
    Subcritical,
    Critical,
    Supercritical,
}

impl BranchingMechanism {
    /// `jumps` holds `(size z_i, weight w_i)` pairs.
    pub fn new(b: f64, c: f64, jumps: Vec<(f64, f64)>) -> Result<Self> {
        if !b.is_finite() {
            return Err(domain("b", b, "finite"));
        }
        if !(c >= 0.0) || !c.is_finite() {
            return Err(domain("c", c, "finite c >= 0"));
        }
        for &(z, w) in &jumps {
            if !(z > 0.0) || !z.is_finite() {
                return Err(domain("jump size", z, "finite and > 0"));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(domain("jump weight", w, "finite and > 0"));
            }
        }
        let mech = Self { b, c, jumps };
        if !mech.beta_tilde().is_finite() {
            return Err(Error::Precondition("2c + Σ w z² must be finite".into()));
        }
        Ok(mech)
    }

    /// The Feller mechanism `ψ(u) = bu + cu²`.
    pub fn feller(b: f64, c: f64) -> Result<Self> {
        Self::new(b, c, Vec::new())
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    pub fn is_feller(&self) -> bool {
        self.jumps.is_empty()
    }

    /// `β̃ = 2c + Σ w_i z_i²`.
    pub fn beta_tilde(&self) -> f64 {
        2.0 * self.c + self.jumps.iter().map(|&(z, w)| w * z * z).sum::<f64>()
    }

    pub fn criticality(&self) -> Criticality {
        if self.b > 0.0 {
            Criticality::Subcritical
        } else if self.b < 0.0 {
            Criticality::Supercritical
        } else {
            Criticality::Critical
        }
    }

    pub(crate) fn psi_unchecked(&self, u: f64) -> f64 {
        let jumps: f64 = self
            .jumps
            .iter()
            .map(|&(z, w)| w * ((-z * u).exp_m1() + z * u))
            .sum();
        self.b * u + self.c * u * u + jumps
    }
}

/// `ψ(u)` for `u >= 0`.
pub fn psi_eval(mech: &BranchingMechanism, u: f64) -> Result<f64> {
    if !(u >= 0.0) || !u.is_finite() {
        return Err(domain("u", u, "finite u >= 0"));
    }
    Ok(mech.psi_unchecked(u))
}

fn check_state(x: f64, t: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("x", x, "finite x > 0"));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain("t", t, "finite t >= 0"));
    }
    Ok(())
}

/// `E_x[X(t)] = x e^{-bt}`.
pub fn csbp_mean(mech: &BranchingMechanism, x: f64, t: f64) -> Result<f64> {
    check_state(x, t)?;
    Ok(x * (-mech.b * t).exp())
}

/// `E_x[X(t)²]`: `x² + xβ̃t` when `b = 0`, otherwise
/// `x²e^{-2bt} - (β̃x/b)(e^{-2bt} - e^{-bt})`.
pub fn csbp_second_moment(mech: &BranchingMechanism, x: f64, t: f64) -> Result<f64> {
    check_state(x, t)?;
    let bt = mech.beta_tilde();
    let b = mech.b;
    if b == 0.0 {
        return Ok(x * x + x * bt * t);
    }
    let e1 = (-b * t).exp();
    let e2 = (-2.0 * b * t).exp();
    Ok(x * x * e2 - bt * x / b * (e2 - e1))
}

/// `E_x[X(E(t))] = x E_β(-b t^β)`.
pub fn tc_mean(mech: &BranchingMechanism, x: f64, t: f64, beta: f64) -> Result<f64> {
    check_state(x, t)?;
    check_beta_closed(beta)?;
    Ok(x * mittag_leffler(beta, -mech.b * t.powf(beta))?)
}

/// `E_x[X(E(t))²]`: `x² + xβ̃ t^β / Γ(β+1)` when `b = 0`, otherwise
/// `x²E_β(-2bt^β) - (β̃x/b)(E_β(-2bt^β) - E_β(-bt^β))`.
pub fn tc_second_moment(mech: &BranchingMechanism, x: f64, t: f64, beta: f64) -> Result<f64> {
    check_state(x, t)?;
    check_beta_closed(beta)?;
    let bt = mech.beta_tilde();
    let b = mech.b;
    let tb = t.powf(beta);
    if b == 0.0 {
        return Ok(x * x + x * bt * tb / gamma_fn(beta + 1.0)?);
    }
    let e1 = mittag_leffler(beta, -b * tb)?;
    let e2 = mittag_leffler(beta, -2.0 * b * tb)?;
    Ok(x * x * e2 - bt * x / b * (e2 - e1))
}
