use thiserror::Error;

/// Errors raised by the simulation and evaluation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain where the operation is defined.
    #[error("{param} = {value} is out of domain: expected {expected}")]
    Domain {
        param: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// Structural precondition on the inputs does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Malformed statistical input (too few samples, sparse cells, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// A time-change could not be resolved within the simulated operational horizon.
    #[error("censored: t = {t} is beyond the simulated path range (max reached {reached})")]
    Censored { t: f64, reached: f64 },

    /// An iterative numerical method failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The requested value cannot be computed to double precision by this route.
    #[error(
        "accuracy loss: alternating sum for n = {n} cancels by a factor {ratio:.3e}; \
         use the quadrature route (yule_fractional_pmf_quadrature) for extended precision"
    )]
    Accuracy { n: u64, ratio: f64 },

    /// A simulation exceeded its event or size budget.
    #[error("resource budget exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(param: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        param,
        value,
        expected,
    }
}

/// Checks `0 < beta <= 1`.
pub(crate) fn check_beta_closed(beta: f64) -> Result<()> {
    if beta > 0.0 && beta <= 1.0 {
        Ok(())
    } else {
        Err(domain("beta", beta, "0 < beta <= 1"))
    }
}

/// Checks `0 < beta < 1`.
pub(crate) fn check_beta_open(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        Err(domain("beta", beta, "0 < beta < 1"))
    }
}
