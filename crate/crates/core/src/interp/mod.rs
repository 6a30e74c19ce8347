//! An exact interpretation of the term language: functions are rational
//! polynomials, scalars are rationals, and the derivative is the coefficient
//! rule.

mod assume;
mod eval;
mod poly;
mod value;

use num_bigint::BigInt;
use thiserror::Error;

use crate::lang::{SyntaxError, TypeError};

pub use assume::{check_assumed_equalities, AssumptionReport, SymbolicVerdict, TrialVerdict, DEFAULT_SEED};
pub use eval::{eval, eval_generic};
pub use poly::MultiPoly;
pub use value::{parse_env_file, Environment, Value};

/// Exact rationals, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Largest total degree a polynomial may reach during evaluation.
pub const MAX_DEGREE: u32 = 64;
/// Largest number of terms a polynomial may hold during evaluation.
pub const MAX_TERMS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("environment mismatch: {0}")]
    EnvironmentMismatch(String),
    #[error("binder body leaves the polynomial fragment")]
    NonPolynomialBody,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("cannot evaluate symbolic {0}")]
    Symbolic(String),
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },
    #[error("bad polynomial: {0}")]
    PolySyntax(String),
    #[error(transparent)]
    IllTyped(#[from] TypeError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// Parse `7`, `-3/4` or `0.25` exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = whole.starts_with('-');
        let w: BigInt = if whole.is_empty() || whole == "-" { BigInt::from(0) } else { whole.parse().ok()? };
        let f: BigInt = frac.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = Rational::new(w.magnitude().clone().into(), 1.into()) + Rational::new(f, scale);
        return Some(if neg { -mag } else { mag });
    }
    Some(Rational::from_integer(s.parse().ok()?))
}
