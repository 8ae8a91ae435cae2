use thiserror::Error;

/// Errors raised by the model's numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `v_o = 0`: H and V_Q become constant and the intrinsic motion degenerates.
    #[error("singular configuration: observable speed v_o = 0 has no intrinsic oscillation")]
    SingularStatic,

    #[error("quadrature did not converge: estimated error {achieved:e} above tolerance {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("root finder did not converge after {iterations} iterations (residual {residual:e})")]
    RootNotConverged { iterations: usize, residual: f64 },

    #[error("normalization tail estimate {estimate:e} above tolerance {tolerance:e}; lower r_floor")]
    TailTruncation { estimate: f64, tolerance: f64 },

    #[error("energy drift {drift:e} above tolerance {tolerance:e}; reduce dtau")]
    EnergyDrift { drift: f64, tolerance: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
