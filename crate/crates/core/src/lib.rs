//! Exact homological algebra for inverse sequences of finitely generated
//! abelian groups and the pro-spaces built from them.
//!
//! The crate is organised bottom-up:
//!
//! * [`fgab`]: Smith and Hermite normal forms, presented groups, lattices.
//! * [`simplicial`]: simplicial complexes, (co)homology, nerves, subdivision.
//! * [`towers`]: `lim` and `lim¹` of towers, the shift map, Milnor sequences.
//! * [`steinitz`]: supernatural numbers and solenoid classification.
//! * [`adic`]: digit arithmetic in profinite completions of `Z^d`.
//! * [`rigidity`]: trivial homomorphisms between completions and conjugacy.
//! * [`cli`]: file-driven job runner and property suites behind the binary.

pub mod adic;
pub mod cli;
pub mod error;
pub mod fgab;
pub mod oracles;
pub mod rigidity;
pub mod simplicial;
pub mod steinitz;
pub mod towers;

pub use error::{Error, Result};
