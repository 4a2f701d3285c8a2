use alloc::string::String;
use core::fmt;

/// Errors raised by the numeric core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Shapes, layouts or parameters that do not fit together.
    Config(String),
    /// An input violated a numeric contract (non-Hermitian matrix, negative
    /// spectrum, value outside its domain).
    NumericContract(String),
    /// Channel parameters fail the complete-positivity conditions.
    CptpViolation {
        lambda: f64,
        lambda_z: f64,
        lambda_star: f64,
        reason: &'static str,
    },
    /// A formula is singular at this point (division by a vanishing quantity).
    Singularity(&'static str),
    /// The time flip needs a unital channel.
    NotBidirectional,
    /// The chosen control outcome has (numerically) zero probability.
    DegeneratePostSelection { prob: f64, t: Option<f64> },
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    /// Attach the grid time at which a post-selection failed.
    pub fn at_time(self, time: f64) -> Self {
        match self {
            Error::DegeneratePostSelection { prob, .. } => Error::DegeneratePostSelection { prob, t: Some(time) },
            other => other,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::NumericContract(msg) => write!(f, "numeric contract violated: {msg}"),
            Error::CptpViolation {
                lambda,
                lambda_z,
                lambda_star,
                reason,
            } => write!(
                f,
                "parameters (λ={lambda}, λ_z={lambda_z}, λ_*={lambda_star}) are not CPTP: {reason}"
            ),
            Error::Singularity(what) => write!(f, "singular point: {what}"),
            Error::NotBidirectional => {
                write!(f, "time flip requires a unital (bidirectional) channel")
            }
            Error::DegeneratePostSelection { prob, t: Some(t) } => {
                write!(f, "post-selection probability {prob:e} below floor at t={t}")
            }
            Error::DegeneratePostSelection { prob, t: None } => {
                write!(f, "post-selection probability {prob:e} below floor")
            }
        }
    }
}

impl core::error::Error for Error {}
