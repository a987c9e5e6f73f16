//! Exact verification of two-parameter quantum affine algebras of
//! simply-laced type in their level-one vertex representation.
//!
//! - [`scalars`]: exact rational functions in `r^{1/4}, s^{1/4}` and the
//!   field abstraction (exact or evaluated at a rational point).
//! - [`roots`]: Cartan data, the two-parameter pairing and the highest root
//!   for the affine types `A`, `D` and `E6`.
//! - [`genfun`]: the generating functions `g_{ij}^±(z)` and their identities.
//! - [`fock`]: the truncated level-one Fock space and its Heisenberg action.
//! - [`vertex`]: vertex-operator modes and the operator evaluator.
//! - [`bracket`]: quantum bracket expressions, root vectors and the
//!   bracket-identity catalog.
//! - [`relations`]: the relation families and the suite runner.
//! - [`cli`]: the `qaffine` command line.

#![allow(clippy::needless_range_loop)]

pub mod bracket;
pub mod cli;
pub mod fock;
pub mod genfun;
pub mod relations;
pub mod roots;
pub mod scalars;
pub mod vertex;
