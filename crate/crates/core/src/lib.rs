//! Homological algebra over finite dimensional quotients of path algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`], [`matrix`]: exact scalars and sparse/dense linear algebra.
//! * [`quiver`], [`algebra`]: quivers, paths and the algebra `KΓ/I`.
//! * [`rep`]: modules as representations, Hom spaces, covers, syzygies and
//!   projective dimension.
//! * [`monomial`]: exact syzygy combinatorics for monomial relation algebras.
//! * [`approx`]: relative right approximations and their minimization.
//! * [`phantom`]: zipper families, towers of approximations and subfactor tests.
//! * [`criteria`]: checkers for the two non-finiteness criteria.
//! * [`format`], [`fixtures`]: text formats and the built-in example bundles.

pub mod algebra;
pub mod approx;
pub mod criteria;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod format;
pub mod matrix;
pub mod monomial;
pub mod phantom;
pub mod quiver;
pub mod rep;

pub use algebra::{Algebra, AlgebraElement, PathCombination};
pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use matrix::Matrix;
pub use quiver::{PathWord, Quiver};
pub use rep::{ModuleMap, PdimVerdict, Representation};

/// Seed used by randomized procedures when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;
