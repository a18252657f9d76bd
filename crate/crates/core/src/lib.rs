//! Crossed modules, crossed squares and crossed n-cubes of finite groups,
//! non-abelian tensor products by coset enumeration, and the homotopy
//! invariants of the classifying space of a crossed square.

#![allow(clippy::needless_range_loop)]

pub mod abelian;
pub mod crossed;
pub mod fp;
pub mod group;
pub mod homotopy;
pub mod input;
pub mod quadratic;
pub mod report;
pub mod tensor;

pub use crossed::{CrossedModule, CrossedNCube, CrossedSquare, ValidatedSquare, ValidationReport};
pub use group::{Elem, FiniteGroup, Group, GroupAction, GroupHom, Subgroup};

/// Integer matrices with checked `i64` arithmetic.
pub type IntMatrix = abelian::Matrix<i64>;
/// Finitely generated abelian groups over `i64`.
pub type FgAbelianGroup = abelian::FgAbelian<i64>;
/// Arbitrary-precision variants.
pub type BigIntMatrix = abelian::Matrix<num_bigint::BigInt>;
pub type BigFgAbelianGroup = abelian::FgAbelian<num_bigint::BigInt>;
