use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain of the function it was passed to.
    #[error("{quantity} = {value} is outside [{min}, {max}]")]
    Domain {
        quantity: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// A scenario parameter violates one of its invariants.
    #[error("invalid `{field}`: {constraint}")]
    Invalid { field: String, constraint: String },

    /// Adaptive quadrature hit its panel cap before reaching the tolerance.
    #[error(
        "quadrature on [{lower}, {upper}] did not converge after {panels} panels \
         (estimate {estimate}, error estimate {error_estimate})"
    )]
    Quadrature {
        lower: f64,
        upper: f64,
        panels: usize,
        estimate: f64,
        error_estimate: f64,
    },

    /// A special-function series or continued fraction failed to converge.
    #[error("{function}({a}, {x}) did not converge")]
    Convergence {
        function: &'static str,
        a: f64,
        x: f64,
    },

    #[error("at alarm location d_a = {alarm_location} km: {source}")]
    AtAlarm {
        alarm_location: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("failed to parse scenario: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, constraint: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            constraint: constraint.into(),
        }
    }

    pub(crate) fn at_alarm(self, alarm_location: f64) -> Self {
        Error::AtAlarm {
            alarm_location,
            source: Box::new(self),
        }
    }
}

/// Returns `Err(Error::Invalid)` naming `field` unless `ok` holds.
pub(crate) fn ensure(ok: bool, field: &str, constraint: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(field, constraint))
    }
}
