use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain where the operation is defined.
    Domain { what: &'static str, value: f64 },
    /// The quantity is undefined for this polytropic index (e.g. `ω̃` at n = 1).
    UndefinedForIndex { what: &'static str, n: f64 },
    /// The integrator exhausted its step budget or step size underflowed.
    Integration { reason: &'static str, at: f64 },
    /// No sign change of θ was found before the step budget ran out.
    SurfaceNotFound { n: f64, last_xi: f64 },
    /// A root that should exist on the stored grid was not bracketed.
    NotFound { what: &'static str },
    /// The invariant-plane right-hand side hit its singular locus.
    SingularPoint { u: f64, w: f64 },
    /// Integration left the regular (Emden) branch.
    Branch { z: f64, w: f64 },
    /// A curve does not cover the range a quadrature needs.
    Coverage { needed: f64, reached: f64 },
    /// Mass-radius relation asked to solve for a quantity the index fixes.
    Degenerate { n: f64, detail: &'static str },
    /// Orbit quadrature endpoint lies where the radicand is negative.
    ForbiddenRegion { r: f64 },
    /// A turning point lies strictly inside a quadrature interval.
    TurningPointCrossing { r: f64 },
    /// The orbit is not bounded, so periods and averages do not exist.
    Unbounded,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::UndefinedForIndex { what, n } => write!(f, "{what} is undefined for n = {n}"),
            Error::Integration { reason, at } => write!(f, "integration failed at {at}: {reason}"),
            Error::SurfaceNotFound { n, last_xi } => {
                write!(f, "theta has no zero for n = {n} up to xi = {last_xi}")
            }
            Error::NotFound { what } => write!(f, "{what} not found on the grid"),
            Error::SingularPoint { u, w } => {
                write!(f, "singular point of dw/du at (u, w) = ({u}, {w})")
            }
            Error::Branch { z, w } => write!(f, "left the regular branch at (z, w) = ({z}, {w})"),
            Error::Coverage { needed, reached } => {
                write!(f, "curve reaches z = {reached} but z = {needed} is required")
            }
            Error::Degenerate { n, detail } => write!(f, "degenerate mass-radius relation at n = {n}: {detail}"),
            Error::ForbiddenRegion { r } => write!(f, "r = {r} is classically forbidden"),
            Error::TurningPointCrossing { r } => {
                write!(f, "turning point near r = {r} inside the interval; split the quadrature there")
            }
            Error::Unbounded => f.write_str("orbit is unbounded"),
        }
    }
}

impl core::error::Error for Error {}
