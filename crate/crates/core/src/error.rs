use thiserror::Error;

/// Errors raised by the cost model, the transforms and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Every unit is scrapped somewhere along the chain, so the unit cost is undefined.
    #[error("degenerate chain: sold volume is zero (survival product {survival:e})")]
    DegenerateChain { survival: f64 },

    #[error("no critical threshold exists: {0}")]
    NoThreshold(String),

    #[error("precondition violated: {0}")]
    ConditionViolated(String),

    #[error("no sign change of the cost difference on [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("root finder did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// The two compared strategies have identical cost everywhere on the bracket.
    #[error("cost difference vanishes identically on [{lo}, {hi}]")]
    DegenerateBracket { lo: f64, hi: f64 },

    #[error("simulation budget exceeded: {requested} unit-replications > {budget}")]
    Overflow { requested: f64, budget: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_fraction(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must lie in [0, 1]",
        });
    }
    Ok(())
}

pub(crate) fn check_nonnegative(name: &'static str, value: f64) -> Result<()> {
    if !(value.is_finite() && value >= 0.0) {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and >= 0",
        });
    }
    Ok(())
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        });
    }
    Ok(())
}
