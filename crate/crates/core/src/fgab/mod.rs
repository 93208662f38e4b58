//! Exact integer linear algebra: normal forms, finitely generated abelian
//! groups, homomorphisms, connecting maps and lattices.

mod group;
mod kernel;
mod lattice;
mod matrix;
mod smith;
mod snake;
mod stable;

pub use group::{hom_decompose, FgGroup, HomDecomposition, Homomorphism, Quotient};
pub use lattice::{Index, Lattice};
pub use matrix::{IntMatrix, JsonInt};
pub use smith::{invariant_factors, kernel_lattice, smith_normal_form, solve_linear, LinearSystem, SmithForm};
pub use snake::{connecting_hom, ExactnessReport, ShortExact, SnakeDiagram, SnakeResult};
pub use stable::{char_poly, eval_matrix, factor_monic, poly_mul, stable_sublattice, Poly, MAX_STABLE_DIM};

#[cfg(test)]
pub(crate) use matrix::bigs;
pub(crate) use matrix::{from_json_vec, json_vec, ser};
