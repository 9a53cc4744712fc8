//! Exact verification of the differential identities of local analytic
//! Moufang loops.
//!
//! A local loop is represented by a chart around its unit in which the
//! multiplication becomes a truncated multivariate power series (a *jet*)
//! with exact rational coefficients. On top of the jet algebra the crate
//! extracts the classical symbol tower of such a chart (auxiliary
//! functions, structure constants, associators of orders one to three)
//! and checks the loop axioms, the Moufang identities, the minimality
//! conditions, the generalized Lie and Maurer-Cartan equations, and the
//! Mal'tsev/Akivis identities of the tangent algebra, all as exact
//! coefficient equalities with no floating tolerances.
//!
//! The jet arithmetic is generic over the scalar type via [`Coeff`]; the
//! loop models and identity checks use arbitrary-precision rationals
//! ([`Rational`]) so that every check is exact.

// tensor contractions read most clearly as explicit index loops
#![allow(clippy::needless_range_loop)]

pub mod associator;
pub mod check;
pub mod coeff;
pub mod jet;
pub mod model;
pub mod octonion;
pub mod rational;
pub mod tangent;
pub mod tensor;
pub mod verifier;

mod error;

pub use check::{CheckResult, FailureWitness};
pub use coeff::Coeff;
pub use error::{Error, Result};
pub use jet::{ExponentVector, Jet, JetVector};
pub use model::{CustomModelSpec, LoopModel, ModelKind};
pub use verifier::{run_suite, CheckName};

/// Exact arbitrary-precision rational scalar, the coefficient field used
/// by all built-in models and identity checks.
pub type Rational = num_rational::BigRational;

/// Jet over exact rationals.
pub type RationalJet = Jet<Rational>;
/// Jet vector over exact rationals.
pub type RationalJetVector = JetVector<Rational>;

/// Single-precision float jet, for approximate work.
pub type F32Jet = Jet<f32>;
/// Double-precision float jet, for approximate work.
pub type F64Jet = Jet<f64>;

use std::sync::OnceLock;

/// Default bound on the truncation order of any constructed jet.
pub const DEFAULT_ORDER_CAP: u32 = 6;

/// Environment variable overriding [`order_cap`].
pub const ORDER_CAP_ENV: &str = "MOUFANG_MAX_ORDER";

/// Global truncation-order cap. Reads `MOUFANG_MAX_ORDER` once; falls back
/// to [`DEFAULT_ORDER_CAP`] when unset or unparseable.
pub fn order_cap() -> u32 {
    static CAP: OnceLock<u32> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(ORDER_CAP_ENV)
            .ok()
            .and_then(|v| parse_order_cap(&v))
            .unwrap_or(DEFAULT_ORDER_CAP)
    })
}

fn parse_order_cap(raw: &str) -> Option<u32> {
    raw.trim().parse::<u32>().ok().filter(|&cap| cap >= 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_cap_parsing() {
        assert_eq!(parse_order_cap("8"), Some(8));
        assert_eq!(parse_order_cap(" 3 "), Some(3));
        assert_eq!(parse_order_cap("0"), None);
        assert_eq!(parse_order_cap("nope"), None);
    }
}
