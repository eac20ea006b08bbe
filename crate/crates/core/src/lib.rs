//! Exact computations on complete MV-algebras viewed as frames.
//!
//! Algebras are products of finite MV-chains `Ł_n` and (rational points of)
//! the unit interval, indexed by finitely many blocks whose multiplicity is
//! finite or countably infinite. On top of that sit frame-theoretic
//! decisions (compactness, algebraicity, coherence, regularity), product
//! homomorphisms, nuclei, ideal lattices of finite Łukasiewicz rings and the
//! lattice-ordered groups `<Z^X, n>` reached through the Γ functor.

pub mod cli;
pub mod config;
pub mod coords;
pub mod element;
pub mod error;
pub mod frame;
pub mod hasse;
pub mod lu;
pub mod morphism;
pub mod nucleus;
pub mod ring;
pub mod signature;
pub mod value;

pub use config::Config;
pub use element::{enumerate, join_all, meet_all, Element};
pub use error::Error;
pub use signature::{Block, Coord, Multiplicity, Signature};
pub use value::{ChainValue, FactorKind};
