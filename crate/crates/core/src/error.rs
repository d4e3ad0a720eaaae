use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {what} = {value} ({reason})")]
    Domain {
        what: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("quadrature did not converge at s = {s}, tau = {tau} after {subdivisions} subdivisions (estimated error {abs_error:e})")]
    Convergence {
        s: f64,
        tau: f64,
        subdivisions: usize,
        abs_error: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(what: &'static str, value: f64, reason: &'static str) -> Result<T> {
    Err(Error::Domain {
        what,
        value,
        reason,
    })
}
