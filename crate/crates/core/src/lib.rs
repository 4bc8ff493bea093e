//! Exact computations around Kostant cascades of irreducible root systems.
//!
//! The crate builds root systems from their Dynkin data, computes the
//! cascade of strongly orthogonal roots, attaches the canonical weights
//! `mu_beta` and their exponent matrix, enumerates orthogonal subsets of the
//! positive roots, validates witness subsets `(D, D')` for zero patterns of
//! central scalars and runs the reconstruction recursion for the parameter
//! map `xi`. All arithmetic is over the integers or exact rationals.

pub mod bits;
pub mod cache;
pub mod cascade;
pub mod dynkin;
pub mod fixtures;
pub mod linalg;
pub mod orthenum;
pub mod reconstruct;
pub mod rootsys;
pub mod subsystem;
pub mod weights;
pub mod witness;


pub use rootsys::{Family, Root, RootSystem, RootSystemType};
pub use cascade::{kostant_cascade, Cascade};
pub use weights::{load_weights, WeightTable};

