use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

const MIN_EXPECTED: f64 = 5.0;
const PROB_SUM_TOL: f64 = 1e-9;

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Input(
            "ks_two_sample needs two nonempty samples".into(),
        ));
    }
    if a.iter().chain(b).any(|x| x.is_nan()) {
        return Err(Error::Input("ks_two_sample got a NaN".into()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Outcome of a chi-square test after cell merging.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    /// Cells after merging, minus one.
    pub df: usize,
}

impl ChiSquareResult {
    /// Passes at significance `level` (e.g. 0.01).
    pub fn passes(&self, level: f64) -> Result<bool> {
        if self.df == 0 {
            return Ok(true);
        }
        Ok(self.statistic <= chi_square_critical(self.df, level)?)
    }
}

/// Upper `level` quantile of the chi-square law with `df` degrees of freedom.
pub fn chi_square_critical(df: usize, level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Input(format!(
            "significance level {level} not in (0, 1)"
        )));
    }
    let law = ChiSquared::new(df as f64)
        .map_err(|e| Error::Input(format!("chi-square with {df} degrees of freedom: {e}")))?;
    Ok(law.inverse_cdf(1.0 - level))
}

/// Groups adjacent cells left to right until each group's `weight` reaches
/// `min_weight`; a short remainder joins the last full group.
///
/// Returns the group index of every input cell.
fn group_cells(weights: &[f64], min_weight: f64) -> Vec<usize> {
    let mut groups = Vec::with_capacity(weights.len());
    let mut current = 0;
    let mut acc = 0.0;
    let mut closed = 0;
    for &w in weights {
        groups.push(current);
        acc += w;
        if acc >= min_weight {
            closed = current + 1;
            current += 1;
            acc = 0.0;
        }
    }
    if closed > 0 {
        for g in groups.iter_mut() {
            *g = (*g).min(closed - 1);
        }
    }
    groups
}

/// Merges adjacent cells until every expected count is at least 5.
///
/// Returns merged `(observed, expected)` pairs.
pub fn merge_cells(counts: &[u64], expected: &[f64]) -> Result<(Vec<u64>, Vec<f64>)> {
    if counts.len() != expected.len() || counts.is_empty() {
        return Err(Error::Input(
            "counts and expectations must be nonempty and equal length".into(),
        ));
    }
    let groups = group_cells(expected, MIN_EXPECTED);
    let n = groups.last().map_or(0, |g| g + 1);
    let mut obs = vec![0u64; n];
    let mut exp = vec![0.0; n];
    for ((&g, &c), &e) in groups.iter().zip(counts).zip(expected) {
        obs[g] += c;
        exp[g] += e;
    }
    Ok((obs, exp))
}

/// Pearson goodness of fit `Σ (O - E)² / E` of `counts` to cell
/// probabilities `probs`.
///
/// The last cell should carry the aggregated tail so that the probabilities
/// sum to one. Adjacent cells are merged until each expects at least 5.
pub fn chi_square_gof(counts: &[u64], probs: &[f64]) -> Result<ChiSquareResult> {
    if counts.len() != probs.len() || counts.is_empty() {
        return Err(Error::Input(
            "counts and probs must be nonempty and equal length".into(),
        ));
    }
    if probs.iter().any(|p| !(*p >= 0.0)) {
        return Err(Error::Input(
            "cell probabilities must be nonnegative".into(),
        ));
    }
    let total_p: f64 = probs.iter().sum();
    if (total_p - 1.0).abs() > PROB_SUM_TOL {
        return Err(Error::Input(format!(
            "cell probabilities sum to {total_p}; aggregate the tail into the last cell"
        )));
    }
    let n: u64 = counts.iter().sum();
    let expected: Vec<f64> = probs.iter().map(|p| p * n as f64).collect();
    let (obs, exp) = merge_cells(counts, &expected)?;
    if exp.len() == 1 {
        return Ok(ChiSquareResult {
            statistic: 0.0,
            df: 0,
        });
    }
    if let Some(e) = exp.iter().find(|&&e| e < MIN_EXPECTED) {
        return Err(Error::Input(format!(
            "a merged cell expects {e} < {MIN_EXPECTED} observations"
        )));
    }
    let statistic = obs
        .iter()
        .zip(&exp)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum();
    Ok(ChiSquareResult {
        statistic,
        df: exp.len() - 1,
    })
}

/// Chi-square homogeneity test between two count vectors over the same cells.
///
/// Cells are merged until each sample expects at least 5 per cell under the
/// pooled proportions.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> Result<ChiSquareResult> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Input(
            "count vectors must be nonempty and equal length".into(),
        ));
    }
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    if na == 0 || nb == 0 {
        return Err(Error::Input(
            "both samples need at least one observation".into(),
        ));
    }
    let (na, nb) = (na as f64, nb as f64);
    let frac = na.min(nb) / (na + nb);
    // smaller sample expects frac · pooled per cell
    let pooled: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| (x + y) as f64 * frac)
        .collect();
    let groups = group_cells(&pooled, MIN_EXPECTED);
    let n = groups.last().map_or(0, |g| g + 1);
    let mut ga = vec![0.0; n];
    let mut gb = vec![0.0; n];
    for ((&g, &x), &y) in groups.iter().zip(a).zip(b) {
        ga[g] += x as f64;
        gb[g] += y as f64;
    }
    if n == 1 {
        return Ok(ChiSquareResult {
            statistic: 0.0,
            df: 0,
        });
    }
    let mut statistic = 0.0;
    for (&x, &y) in ga.iter().zip(&gb) {
        let pooled = (x + y) / (na + nb);
        let (ea, eb) = (pooled * na, pooled * nb);
        if ea.min(eb) < MIN_EXPECTED {
            return Err(Error::Input(format!(
                "a merged cell expects {} < {MIN_EXPECTED} observations",
                ea.min(eb)
            )));
        }
        statistic += (x - ea).powi(2) / ea + (y - eb).powi(2) / eb;
    }
    Ok(ChiSquareResult {
        statistic,
        df: n - 1,
    })
}
