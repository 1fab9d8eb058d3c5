use crate::csbp::BranchingMechanism;
use crate::error::{domain, Error, Result};
use crate::special_fn::{check_time_grid, GridFunction};

/// Absolute (and relative) local error tolerance of the exponent solver.
pub const EXPONENT_ATOL: f64 = 1e-10;
const MAX_STEPS: usize = 1_000_000;
const MAX_REJECTS: usize = 10_000;

// Dormand–Prince 5(4) tableau
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// fifth- minus fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// `ν_t(λ)` on `t_grid`, solving `dν/dt = -ψ(ν)`, `ν_0 = λ`.
///
/// Adaptive Dormand–Prince 5(4) from `t = 0`, landing on every grid point.
pub fn solve_exponent(
    mech: &BranchingMechanism,
    lambda: f64,
    t_grid: &[f64],
) -> Result<GridFunction> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(domain("lambda", lambda, "finite lambda > 0"));
    }
    check_time_grid(t_grid)?;
    let f = |y: f64| -mech.psi_unchecked(y.max(0.0));
    let mut t = 0.0;
    let mut y = lambda;
    let mut k1 = f(y);
    let mut h = initial_step(lambda, k1);
    let mut steps = 0usize;
    let mut rejects = 0usize;
    let mut values = Vec::with_capacity(t_grid.len());
    for &target in t_grid {
        while t < target {
            if steps >= MAX_STEPS || rejects >= MAX_REJECTS {
                return Err(Error::Numerical(format!(
                    "exponent solver gave up at t = {t} (target {target}, nu = {y}, \
                     step {h:e}, {steps} steps, {rejects} rejections)"
                )));
            }
            let last = h >= target - t;
            let step = if last { target - t } else { h };
            let k2 = f(y + step * A2[0] * k1);
            let k3 = f(y + step * (A3[0] * k1 + A3[1] * k2));
            let k4 = f(y + step * (A4[0] * k1 + A4[1] * k2 + A4[2] * k3));
            let k5 = f(y + step * (A5[0] * k1 + A5[1] * k2 + A5[2] * k3 + A5[3] * k4));
            let k6 = f(y + step * (A6[0] * k1 + A6[1] * k2 + A6[2] * k3 + A6[3] * k4 + A6[4] * k5));
            let y_new = y + step * (B[0] * k1 + B[2] * k3 + B[3] * k4 + B[4] * k5 + B[5] * k6);
            let k7 = f(y_new);
            let err =
                step * (E[0] * k1 + E[2] * k3 + E[3] * k4 + E[4] * k5 + E[5] * k6 + E[6] * k7);
            let scale = EXPONENT_ATOL + EXPONENT_ATOL * y.abs().max(y_new.abs());
            let ratio = (err / scale).abs();
            if !y_new.is_finite() {
                return Err(Error::Numerical(format!(
                    "exponent solver produced {y_new} at t = {t}"
                )));
            }
            if ratio <= 1.0 {
                t = if last { target } else { t + step };
                y = y_new.max(0.0);
                k1 = k7;
                steps += 1;
            } else {
                rejects += 1;
            }
            let factor = if ratio == 0.0 {
                5.0
            } else {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            };
            // a shortened final step says nothing about the natural step size
            if !(last && ratio <= 1.0) || factor < 1.0 {
                h = step * factor;
            }
        }
        values.push(y);
    }
    GridFunction::new(t_grid.to_vec(), values)
}

fn initial_step(y: f64, dy: f64) -> f64 {
    if dy == 0.0 {
        return 0.1;
    }
    (1e-2 * (y.abs() + EXPONENT_ATOL) / dy.abs()).clamp(1e-8, 0.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_condition_and_linear_case() {
        let m = BranchingMechanism::feller(0.7, 0.0).unwrap();
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.25).collect();
        let nu = solve_exponent(&m, 1.5, &grid).unwrap();
        assert_eq!(nu.values()[0], 1.5);
        for (t, v) in grid.iter().zip(nu.values()) {
            assert!((v - 1.5 * (-0.7 * t).exp()).abs() < 1e-8);
        }
    }

    #[test]
    fn bernoulli_case() {
        let (b, c, lambda): (f64, f64, f64) = (1.0, 1.0, 2.0);
        let m = BranchingMechanism::feller(b, c).unwrap();
        let nu = solve_exponent(&m, lambda, &[1.0]).unwrap().values()[0];
        let e = (-b).exp();
        let exact = b * lambda * e / (b + c * lambda * (1.0 - e));
        assert!((nu - exact).abs() < 1e-8);
        assert!((exact - 0.324_947_231_372_689_9).abs() < 1e-15);
    }

    #[test]
    fn supercritical_converges_to_root() {
        // ψ(u) = -u + u², positive root 1
        let m = BranchingMechanism::feller(-1.0, 1.0).unwrap();
        let nu = solve_exponent(&m, 0.2, &[40.0]).unwrap().values()[0];
        assert!((nu - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_lambda() {
        let m = BranchingMechanism::feller(1.0, 1.0).unwrap();
        assert!(solve_exponent(&m, 0.0, &[1.0]).is_err());
        assert!(solve_exponent(&m, 1.0, &[1.0, 0.5]).is_err());
    }
}
