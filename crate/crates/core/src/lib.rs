//! Exact computer algebra for Fuchsian ordinary differential operators with
//! three singular points {0, 1, infinity}.
//!
//! The crate provides, bottom up:
//!
//! * [`rat`], [`poly`], [`ratfunc`] — arbitrary-precision rationals, dense
//!   univariate polynomials and rational functions in `x` (the coefficient
//!   field of everything else);
//! * [`weyl`] — the noncommutative algebra `Q(x)[D]` with `D = d/dx`:
//!   composition, Euclidean division, adjoints, `(x, theta, D)`-forms and
//!   truncated series application;
//! * [`fuchs`] — Riemann schemes, indicial polynomials, local exponents,
//!   spectral types, accessory-parameter counts, no-logarithm tests and
//!   Frobenius series;
//! * [`catalog`] — the operator families E2, H3..H6, G6, E6 and the
//!   self-adjoint instances saE2..saE6;
//! * [`transforms`] — addition (gauge conjugation), middle convolution,
//!   coordinate changes, pipelines between the families;
//! * [`shifts`] — shift-relation solving, S-values, remote S-values,
//!   inverse shift operators and reducibility certificates;
//! * [`factor`] — explicit factorizations at special parameter values,
//!   Kummer factorizations of E2, polynomial solutions and the [1113]
//!   decomposition of E6.
//!
//! All arithmetic is exact; every identity asserted by the library is an
//! operator identity over the rationals, not a numerical approximation.

pub mod catalog;
pub mod factor;
pub mod fuchs;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod rat;
pub mod ratfunc;
pub mod shifts;
pub mod transforms;
pub mod weyl;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operator is not left-divisible by the requested power of D: {0}")]
    NotDivisible(String),
    #[error("series truncation order too short: {0}")]
    TruncationTooShort(String),
    #[error("irregular singularity at {0}")]
    IrregularSingularity(String),
    #[error("logarithmic obstruction in Frobenius recursion: {0}")]
    ResonanceObstruction(String),
    #[error("transformed operator was not recognized as {0}")]
    RecognitionFailure(String),
    #[error("shift relation has no solution for the given ansatz")]
    NoSolution,
    #[error("shift relation solution is not unique (solution space dimension {0})")]
    NonUnique(usize),
    #[error("composition does not reduce to a constant modulo the operator: {0}")]
    NotConstant(String),
    #[error("inverse-operator construction obstructed: {0}")]
    ObstructionAtPole(String),
    #[error("family has no adjoint symmetry usable here: {0}")]
    SymmetryUnavailable(String),
    #[error("parameter condition for this factorization is not met: {0}")]
    ConditionNotMet(String),
    #[error("operator is not reducible: {0}")]
    NotReducible(String),
    #[error("interpolative expression has a pole: s = {0}")]
    PoleAtSpecialS(String),
    #[error("integer exponent violates the hypothesis: {0}")]
    IntegerExponent(String),
    #[error("rational kernel of expected dimension not found: {0}")]
    RationalKernelNotFound(String),
    #[error("factorization transport case undetermined: {0}")]
    CaseUndetermined(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
