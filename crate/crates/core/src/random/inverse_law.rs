use std::f64::consts::PI;

use crate::error::{check_beta_open, domain, Result};
use crate::quad::kronrod_rule;

const U_PANELS: usize = 128;
const TAIL_EXPONENT: f64 = 50.0;
// φ-panels approach π geometrically down to this width
const PHI_MIN_GAP: f64 = 1e-15;
const PHI_BULK_PANELS: usize = 24;

/// The law of the inverse subordinator `E(t)` for fixed `t > 0`, `β ∈ (0, 1)`.
///
/// With `α = 1/(1-β)` and `c = t^{-βα}`,
///
/// `P(E(t) > u) = (1/π) ∫₀^π exp(-c A(φ) u^α) dφ`,
/// `A(φ) = sin(βφ)^{βα} sin((1-β)φ) / sin(φ)^α`,
///
/// which follows from Kanter's representation of the stable law. The density
/// is tabulated on Kronrod nodes over `[0, U]` where the survival function
/// drops below `e^{-50}`, so expectations of smooth bounded functions are
/// accurate to roughly machine precision.
#[derive(Debug, Clone)]
pub struct InverseStableLaw {
    beta: f64,
    t: f64,
    alpha: f64,
    ln_c: f64,
    // (ln A(φ), weight / π)
    phi_rule: Vec<(f64, f64)>,
    upper: f64,
    // (u, weight · h(u))
    density_rule: Vec<(f64, f64)>,
}

impl InverseStableLaw {
    pub fn new(beta: f64, t: f64) -> Result<Self> {
        check_beta_open(beta)?;
        if !(t > 0.0) || !t.is_finite() {
            return Err(domain("t", t, "finite t > 0"));
        }
        let alpha = 1.0 / (1.0 - beta);
        let ln_c = -beta * alpha * t.ln();
        let phi_rule = phi_rule(beta);
        // A is increasing with A(0) = (1-β) β^{βα}
        let ln_a0 = (1.0 - beta).ln() + beta * alpha * beta.ln();
        let upper = ((TAIL_EXPONENT.ln() - ln_c - ln_a0) / alpha).exp();
        let mut law = Self {
            beta,
            t,
            alpha,
            ln_c,
            phi_rule,
            upper,
            density_rule: Vec::new(),
        };
        let width = upper / U_PANELS as f64;
        let mut density_rule = Vec::with_capacity(15 * U_PANELS);
        for i in 0..U_PANELS {
            let a = width * i as f64;
            for (u, w) in kronrod_rule(a, a + width) {
                density_rule.push((u, w * law.pdf(u)));
            }
        }
        law.density_rule = density_rule;
        Ok(law)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Right end of the tabulated support; `P(E(t) > upper) < e^{-50}`.
    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// `P(E(t) > u)`.
    pub fn survival(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 1.0;
        }
        let shift = self.ln_c + self.alpha * u.ln();
        self.phi_rule
            .iter()
            .map(|&(ln_a, w)| w * (-(ln_a + shift).exp()).exp())
            .sum()
    }

    /// Density of `E(t)` at `u`.
    pub fn pdf(&self, u: f64) -> f64 {
        if u < 0.0 {
            return 0.0;
        }
        if u == 0.0 {
            // h(0, t) = t^{-β} / Γ(1-β)
            return self.t.powf(-self.beta) * crate::special_fn::recip_gamma(1.0 - self.beta);
        }
        let shift = self.ln_c + self.alpha * u.ln();
        let sum: f64 = self
            .phi_rule
            .iter()
            .map(|&(ln_a, w)| {
                let ln_y = ln_a + shift;
                if ln_y > 7.0 {
                    // y e^{-y} < 1e-400
                    return 0.0;
                }
                let y = ln_y.exp();
                w * y * (-y).exp()
            })
            .sum();
        self.alpha * sum / u
    }

    /// Tabulated `(u, weight · h(u))` pairs.
    pub(crate) fn density_rule(&self) -> &[(f64, f64)] {
        &self.density_rule
    }

    /// `E[f(E(t))]` by the tabulated density.
    pub fn expect<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.density_rule.iter().map(|&(u, wh)| wh * f(u)).sum()
    }
}

fn ln_a(beta: f64, phi: f64) -> f64 {
    let alpha = 1.0 / (1.0 - beta);
    beta * alpha * (beta * phi).sin().ln() + ((1.0 - beta) * phi).sin().ln()
        - alpha * phi.sin().ln()
}

fn phi_rule(beta: f64) -> Vec<(f64, f64)> {
    let mut edges: Vec<f64> = (0..PHI_BULK_PANELS)
        .map(|i| 0.75 * PI * i as f64 / PHI_BULK_PANELS as f64)
        .collect();
    // A(φ) ~ (π - φ)^{-α} near π: shrink gaps so A grows by at most 4 per panel
    let ratio = 0.5f64.powf((2.0 * (1.0 - beta)).min(1.0));
    let mut gap = 0.25 * PI;
    while gap > PHI_MIN_GAP {
        gap *= ratio;
        edges.push(PI - gap);
    }
    edges.push(PI);
    edges
        .windows(2)
        .flat_map(|w| kronrod_rule(w[0], w[1]))
        .map(|(phi, w)| (ln_a(beta, phi), w / PI))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::{gamma_fn, mittag_leffler};

    #[test]
    fn total_mass_is_one() {
        for &beta in &[0.2, 0.5, 0.6, 0.9, 0.99] {
            let law = InverseStableLaw::new(beta, 1.3).unwrap();
            assert!((law.expect(|_| 1.0) - 1.0).abs() < 1e-10, "beta {beta}");
            assert!((law.survival(0.0) - 1.0).abs() < 1e-14);
            assert!((law.survival(1e-12) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn moments_match_closed_forms() {
        for &(beta, t) in &[(0.4, 1.0), (0.7, 2.0), (0.6, 1.0)] {
            let law = InverseStableLaw::new(beta, t).unwrap();
            let m1 = law.expect(|u| u);
            let m2 = law.expect(|u| u * u);
            let e1 = t.powf(beta) / gamma_fn(1.0 + beta).unwrap();
            let e2 = 2.0 * t.powf(2.0 * beta) / gamma_fn(1.0 + 2.0 * beta).unwrap();
            assert!((m1 - e1).abs() < 1e-10 * e1, "{m1} vs {e1}");
            assert!((m2 - e2).abs() < 1e-10 * e2, "{m2} vs {e2}");
        }
    }

    #[test]
    fn laplace_transform_is_mittag_leffler() {
        let law = InverseStableLaw::new(0.5, 2.0).unwrap();
        let lt = law.expect(|u| (-u).exp());
        let ml = mittag_leffler(0.5, -2f64.sqrt()).unwrap();
        assert!((lt - ml).abs() < 1e-12, "{lt} vs {ml}");
    }

    #[test]
    fn density_at_zero_is_continuous() {
        let law = InverseStableLaw::new(0.6, 1.0).unwrap();
        assert!((law.pdf(0.0) - law.pdf(1e-9)).abs() < 1e-6);
    }

    #[test]
    fn survival_matches_half_normal_at_beta_half() {
        // β = 1/2: E(t) is distributed as |N(0, 2t)|
        let t: f64 = 1.5;
        let law = InverseStableLaw::new(0.5, t).unwrap();
        // erfc(u / (2√t)) by mpmath
        for &(u, erfc) in &[
            (0.1, 0.953_959_692_772_038_6),
            (0.7, 0.686_105_956_995_555_8),
            (2.0, 0.248_213_078_989_923_5),
            (4.0, 0.020_921_335_337_794_01),
        ] {
            let expect = erfc;
            assert!((law.survival(u) - expect).abs() < 1e-13, "u {u}");
        }
    }
}
