//! Liftable mapping class groups of regular abelian covers of the genus-2 surface.
//!
//! The crate works at the level of the symplectic representation: exact
//! matrices over `Z` and `Z/k`, Dehn-twist words and their images, kernel
//! lattices of covers, finite orbit graphs, stabilizer factorizations and
//! the assembly of generating sets from a graph action.

pub mod arith;
pub mod assembly;
pub mod bound;
pub mod cover;
pub mod gamma0;
pub mod graph;
pub mod lattice;
pub mod pipeline;
pub mod report;
pub mod search;
pub mod stabilizers;
pub mod symplectic;

pub use bound::{BoundError, EnumerationBound};
pub use symplectic::{HVector, SymplecticError, SymplecticMatrix};
pub mod words;

pub use words::{psi, psi_mod, TwistWord};
