//! Exact arithmetic: rationals, real quadratic surds, perfect powers and
//! multiplicative dependence, plus a precision-parameterised float for the
//! few places where a real value has to be approximated.

mod dependence;
mod hpfloat;
mod perfect_power;
mod rational;
mod surd;

use num_bigint::BigInt;
use thiserror::Error;

pub use dependence::{factor_integer, is_probable_prime, multiplicative_dependence, Dependence};
pub use hpfloat::HpFloat;
pub use num_rational::BigRational;
pub use perfect_power::{is_perfect_power, PerfectPower};
pub(crate) use rational::in_open_unit_interval;
pub use rational::{
    format_rational, parse_rational, parse_rational_list, rat, serde_bigint, serde_natural,
    serde_rational, serde_rational_vec,
};
pub use surd::{quad_roots, surd_to_float, QuadRoots, QuadSurd};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("x^2 - {n}x + {m} has non-positive discriminant {discriminant}")]
    NonPositiveDiscriminant {
        n: i64,
        m: i64,
        discriminant: BigInt,
    },
    #[error("radicand {radicand} {reason}")]
    BadRadicand {
        radicand: BigInt,
        reason: &'static str,
    },
    #[error("precision of {0} bits is below the 53-bit minimum")]
    PrecisionTooLow(usize),
    #[error("{0} is not in the open interval (0, 1)")]
    OutOfUnitInterval(String),
    #[error("cannot factor {value}: {reason}")]
    Unknown { value: String, reason: &'static str },
    #[error("invalid rational {text:?}: {reason}")]
    BadRational { text: String, reason: String },
}
