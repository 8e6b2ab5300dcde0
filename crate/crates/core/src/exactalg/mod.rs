//! Exact rational and integer linear algebra.

mod matrix;
mod rational;
mod smith;

pub use matrix::{dot, IntMatrix, QMatrix, QVector};
pub use rational::{
    exact_sqrt, format_rational, frac, parse_rational, rat, serde_str, to_i64, Rational,
};
pub use smith::{smith_normal_form, SmithForm};

/// Inverse of a square nonsingular matrix.
pub fn qmat_inverse(m: &QMatrix) -> crate::Result<QMatrix> {
    m.inverse()
}

/// Solution of `a · x = b` for square nonsingular `a`.
pub fn linear_solve(a: &QMatrix, b: &[Rational]) -> crate::Result<QVector> {
    a.solve(b)
}
