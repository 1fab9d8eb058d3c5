//! Sampled process paths.

use crate::error::{Error, Result};
use crate::special_fn::check_time_grid;

/// How a [`PathGrid`] is read between its grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    /// Càdlàg step function: the value at the last grid point `<= t`.
    Step,
    /// Piecewise-linear between grid points.
    Linear,
}

/// A time grid paired with nonnegative process values.
#[derive(Debug, Clone, PartialEq)]
pub struct PathGrid {
    t_grid: Vec<f64>,
    values: Vec<f64>,
    interpolation: Interpolation,
}

impl PathGrid {
    pub fn new(t_grid: Vec<f64>, values: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        if t_grid.len() != values.len() || t_grid.is_empty() {
            return Err(Error::Precondition(format!(
                "path needs equal, nonzero lengths (got {} times, {} values)",
                t_grid.len(),
                values.len()
            )));
        }
        check_time_grid(&t_grid)?;
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0)) {
            return Err(Error::Precondition(format!("path value {v} is negative")));
        }
        Ok(Self {
            t_grid,
            values,
            interpolation,
        })
    }

    pub(crate) fn from_parts_unchecked(
        t_grid: Vec<f64>,
        values: Vec<f64>,
        interpolation: Interpolation,
    ) -> Self {
        debug_assert_eq!(t_grid.len(), values.len());
        Self {
            t_grid,
            values,
            interpolation,
        }
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last_value(&self) -> f64 {
        *self.values.last().expect("paths are nonempty")
    }

    /// Value at time `t`; `None` outside `[t_grid[0], t_grid[last]]`
    /// (steps extend to the right without bound).
    pub fn value_at(&self, t: f64) -> Option<f64> {
        let first = self.t_grid[0];
        if t < first {
            return None;
        }
        let idx = self.t_grid.partition_point(|&s| s <= t) - 1;
        match self.interpolation {
            Interpolation::Step => Some(self.values[idx]),
            Interpolation::Linear => {
                if idx + 1 == self.t_grid.len() {
                    return (t == self.t_grid[idx]).then_some(self.values[idx]);
                }
                let (t0, t1) = (self.t_grid[idx], self.t_grid[idx + 1]);
                let w = (t - t0) / (t1 - t0);
                Some(self.values[idx] * (1.0 - w) + self.values[idx + 1] * w)
            }
        }
    }
}
