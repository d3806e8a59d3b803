//! Exact arithmetic: field towers over ℚ, sparse multivariate polynomials
//! and the univariate toolkit built on them.

mod fixed;
mod level;
mod modp;
mod multipoly;
mod parse;
mod square;
mod tower;
mod univariate;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use fixed::{refine_root, CFixed};
pub use modp::irreducible_over_q;
pub use multipoly::{Monomial, MultiPoly};
pub use square::is_square;
pub use tower::{cyclotomic, Embedding, FieldElement, StepData, StepInfo, Tower};
pub use univariate::{
    bareiss_determinant, resultant_poly,
    count_real_roots, determinant, discriminant, poly_divmod, poly_gcd, resultant,
    squarefree_part, sylvester_matrix, sylvester_resultant, vieta_sum_product, Interval,
    SturmChain,
};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("zero divisor")]
    DivisionByZero,
    #[error("zero divisor in tower: relation of {generator} has factor {factor}")]
    TowerZeroDivisor { generator: String, factor: String },
    #[error("no variable: both polynomials are constant in {0}")]
    NoVariable(String),
    #[error("repeated roots")]
    RepeatedRoots,
    #[error("coefficient field is not ordered: {0}")]
    Unordered(String),
    #[error("tower mismatch")]
    TowerMismatch,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("not univariate in {0}")]
    NotUnivariate(String),
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("inexact operation: {0}")]
    Inexact(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },
}

/// n/d as a rational.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses an integer or fraction literal such as `-7/3`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}
