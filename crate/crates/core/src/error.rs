use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {0} is a pole of the gamma function")]
    Pole(f64),

    #[error("gamma({0}) overflows the f64 range")]
    Overflow(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge (partial value {partial}, error estimate {abs_error:e})")]
    NonConvergence {
        what: &'static str,
        partial: f64,
        abs_error: f64,
    },

    #[error("integral diverges: estimated tail decay u^-{decay:.4} is not integrable")]
    Divergence { decay: f64 },

    #[error("integrand returned a non-finite value {value} at {at}")]
    NonFinite { at: f64, value: f64 },

    #[error("inconsistent results: {0}")]
    Consistency(String),

    #[error("no equilibrium measure exists for q = {q} < 1 (the signed measure never develops a negative part)")]
    NoEquilibrium { q: f64 },

    #[error("q = 1 is weakly admissible: the equilibrium measure is the balayage onto the whole line and has unbounded support")]
    WeaklyAdmissible,

    #[error("root finder for {what}: {reason}")]
    Root { what: &'static str, reason: String },

    #[error("solver routes disagree: spread {spread:e} exceeds {allowed:e}")]
    Consensus { spread: f64, allowed: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
