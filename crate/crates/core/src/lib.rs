//! Construction, composition, invariance analysis and reduction of dynamical
//! Lie algebras generated by quantum-control Hamiltonians.

pub mod dense;
pub mod error;
pub mod genset;
pub mod invariance;
pub mod closure;
pub mod composition;
pub mod linalg;
pub mod models;
pub mod pauli;
pub mod reduction;
pub mod report;
pub mod trotter;

/// Complex scalar used throughout.
pub type Complex64 = nalgebra::Complex<f64>;

pub use nalgebra;

pub use dense::{evolve, hs_inner, operator_norm, spectral_projectors, DenseOperator, Role};
pub use error::{Error, Result};
pub use genset::{Generator, GeneratorOp, GeneratorSet};
pub use pauli::{pauli_multiply, symplectic_commutes, Pauli, PauliString, PauliSum, Phase};
