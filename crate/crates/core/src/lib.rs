//! Local-global tests for linear dependence of points on elliptic curves
//! over Q and of elements of Q^*.
//!
//! Start with [`detector::detect_ec`] or [`detector::detect_mul`]. The
//! guide in `book/` walks through the pieces in order.

pub mod arith;
pub mod ec_finite;
pub mod ec_rational;
pub mod relation_solver;
pub mod detector;

/// The guide's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/reduction.md")]
    mod reduction {}
    #[doc = include_str!("../../../book/src/finite-groups.md")]
    mod finite_groups {}
    #[doc = include_str!("../../../book/src/relations.md")]
    mod relations {}
    #[doc = include_str!("../../../book/src/verdicts.md")]
    mod verdicts {}
    #[doc = include_str!("../../../book/src/torsion.md")]
    mod torsion {}
    #[doc = include_str!("../../../book/src/multiplicative.md")]
    mod multiplicative {}
    #[doc = include_str!("../../../book/src/witness.md")]
    mod witness {}
}
