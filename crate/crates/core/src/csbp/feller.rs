use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Error, Result};
use crate::path::{Interpolation, PathGrid};
use crate::special_fn::{check_time_grid, uniform_step};

/// Default Euler–Maruyama step.
pub const DEFAULT_FELLER_STEP: f64 = 1e-3;

pub(crate) fn check_feller(x0: f64, b: f64, c: f64) -> Result<()> {
    if !(x0 > 0.0) || !x0.is_finite() {
        return Err(domain("x0", x0, "finite x0 > 0"));
    }
    if !b.is_finite() {
        return Err(domain("b", b, "finite"));
    }
    if !(c >= 0.0) || !c.is_finite() {
        return Err(domain("c", c, "finite c >= 0"));
    }
    Ok(())
}

/// Euler–Maruyama values at steps `0..=n_steps` of size `h`, full truncation,
/// absorbed at 0.
pub(crate) fn euler_feller<R: Rng + ?Sized>(
    x0: f64,
    b: f64,
    c: f64,
    h: f64,
    n_steps: usize,
    rng: &mut R,
) -> Vec<f64> {
    let sd = (2.0 * c * h).sqrt();
    let drift = 1.0 - b * h;
    let mut x = x0;
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(x);
    for _ in 0..n_steps {
        if x > 0.0 {
            let z: f64 = rng.sample(StandardNormal);
            x = drift * x + sd * x.sqrt() * z;
            if x <= 0.0 {
                x = 0.0;
            }
        }
        out.push(x);
    }
    out
}

/// Feller diffusion `dX = -bX dt + √(2cX) dW` on a uniform grid.
///
/// The process starts from `x0` at `t_grid[0]` and is stepped once per grid
/// interval. `c = 0` gives the deterministic flow.
pub fn simulate_feller<R: Rng + ?Sized>(
    x0: f64,
    b: f64,
    c: f64,
    t_grid: &[f64],
    rng: &mut R,
) -> Result<PathGrid> {
    check_feller(x0, b, c)?;
    check_time_grid(t_grid)?;
    if t_grid.is_empty() {
        return Err(Error::Precondition("t_grid is empty".into()));
    }
    let values = if t_grid.len() == 1 {
        vec![x0]
    } else {
        let h = uniform_step(t_grid)
            .ok_or_else(|| Error::Precondition("simulate_feller needs a uniform t_grid".into()))?;
        euler_feller(x0, b, c, h, t_grid.len() - 1, rng)
    };
    Ok(PathGrid::from_parts_unchecked(
        t_grid.to_vec(),
        values,
        Interpolation::Linear,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::RngStream;
    use crate::special_fn::GridFunction;

    #[test]
    fn vanishing_noise_follows_ode() {
        let grid = GridFunction::uniform_grid(0.0, 1.0, 10_000);
        let mut rng = RngStream::new(1, 0);
        let p = simulate_feller(2.0, 1.0, 1e-12, &grid, &mut rng).unwrap();
        for (t, x) in grid.iter().zip(p.values()) {
            assert!((x - 2.0 * (-t).exp()).abs() < 1e-4);
        }
    }

    #[test]
    fn absorbing_and_nonnegative() {
        let grid = GridFunction::uniform_grid(0.0, 5.0, 5000);
        let mut rng = RngStream::new(2, 0);
        for _ in 0..50 {
            let p = simulate_feller(0.1, 0.5, 2.0, &grid, &mut rng).unwrap();
            let v = p.values();
            assert!(v.iter().all(|&x| x >= 0.0));
            if let Some(i) = v.iter().position(|&x| x == 0.0) {
                assert!(v[i..].iter().all(|&x| x == 0.0));
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let mut rng = RngStream::new(0, 0);
        assert!(simulate_feller(0.0, 1.0, 1.0, &[0.0, 1.0], &mut rng).is_err());
        assert!(simulate_feller(1.0, 1.0, -1.0, &[0.0, 1.0], &mut rng).is_err());
        assert!(simulate_feller(1.0, 1.0, 1.0, &[0.0, 1.0, 3.0], &mut rng).is_err());
    }
}
