use alloc::string::String;

use crate::num::Rational;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("point {x} lies outside the function domain")]
    OutsideDomain { x: Rational },
    #[error("interval [{lo}, {hi}] is not contained in the function domain")]
    IntervalOutsideDomain { lo: Rational, hi: Rational },
    #[error("{what} must be positive")]
    NonPositive { what: &'static str },
    #[error("{what} is out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },
    #[error("invalid function: {0}")]
    InvalidFunction(&'static str),
    #[error("operation `{op}` does not support the {variant} variant")]
    Unsupported {
        op: &'static str,
        variant: &'static str,
    },
    #[error("spike supports {first} and {second} overlap")]
    OverlappingSupports { first: usize, second: usize },
    #[error("empty region")]
    EmptyRegion,
    #[error("branch-and-bound budget exhausted with bracket [{lower}, {upper}]")]
    Unresolved { lower: Rational, upper: Rational },
    #[error("uninhabited zero set")]
    UninhabitedZeroSet,
    #[error("well-behavedness violation: f({x}) = 0 although x is at positive distance from the declared zero set")]
    WellBehavednessViolation { x: Rational },
    #[error("distance decision budget exhausted at {x}")]
    DecisionBudget { x: Rational },
    #[error("invalid modulus: {0}")]
    InvalidModulus(&'static str),
    #[error("modulus has no entry at or below eps = {eps}")]
    NoTableEntry { eps: Rational },
    #[error("cannot certify positivity: certified lower bound on inf |f| over K is {lower}")]
    CannotCertifyPositivity { lower: Rational },
    #[error("endpoints do not bracket a sign change")]
    NotBracketing,
    #[error("modulus failure at {at}: {reason}")]
    ModulusFailure { at: Rational, reason: String },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("enumeration tail does not separate from the region within the search budget")]
    TailDoesNotSeparate,
}
