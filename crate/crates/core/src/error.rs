use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of subdivisions.
    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    Convergence { estimate: f64, error_bound: f64 },

    /// The posterior under the partial-information prior is improper for this data.
    #[error("improper posterior: {0}")]
    Propriety(String),

    #[error("sampler initialization failed: {0}")]
    Initialization(String),

    #[error("elicitation failed: {0}")]
    Elicitation(String),

    #[error("empty chain")]
    EmptyChain,

    #[error("degenerate chain: {0}")]
    DegenerateChain(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
