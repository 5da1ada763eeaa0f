//! Spectral laboratory for symmetric `m`-block circulant (and related patterned)
//! random matrix ensembles.
//!
//! The crate generates ensemble samples, computes eigenvalue statistics
//! (dense Jacobi and a DFT block-diagonalization fast path), evaluates the
//! closed-form limiting densities `f_m` and their moments, and cross-validates
//! simulation, pairing combinatorics, and closed forms against each other.
//!
//! Trial-level work (Monte Carlo sweeps, pairing enumeration, Diophantine
//! counting) runs data-parallel on rayon when the default `parallel` feature
//! is enabled; disabling it yields a dependency-free sequential build with
//! identical results.

pub mod closedform;
pub mod dist;
pub mod ensemble;
pub mod error;
pub mod exec;
pub mod genpattern;
pub mod matrix;
pub mod moments;
pub mod pattern;
pub mod quad;
pub mod spectra;

mod exact;

pub use dist::EntryDistribution;
pub use ensemble::{EnsembleKind, EnsembleSpec, LinkKey};
pub use error::{Error, Result};
pub use matrix::SymmetricMatrix;
pub use pattern::Pattern;
pub use spectra::{SpacingSample, SpectralMeasure};
