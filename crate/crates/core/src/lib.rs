//! Relative Gel'fand-Fuks cohomology of formal Hamiltonian vector fields on
//! the symplectic plane, computed exactly over the rationals.
//!
//! The layers, bottom up:
//!
//! * [`polyalg`]: divided-power monomials, Poisson structure constants and
//!   the `sl(2)` action on their duals.
//! * [`cochain`]: shapes, canonical wedge words and the wedge product.
//! * [`invariants`]: the `sp(2)`-trivial part of each graded cochain space.
//! * [`coboundary`]: the operators `d0` (on `ham`) and `d1` (on `ham0`) and
//!   their matrices between invariant bases.
//! * [`linformgb`]: echelon ("Gröbner") bases of linear forms, normal forms,
//!   kernels and quotients.
//! * [`pipeline`]: cohomology tables, generators, the `omega ^` factorization
//!   check, checkpoints and file formats.

pub mod budget;
pub mod coboundary;
pub mod cochain;
pub mod config;
pub mod error;
pub mod invariants;
pub mod linformgb;
mod modp;
pub mod pipeline;
pub mod polyalg;
pub mod rational;

pub use error::{Error, Result};
