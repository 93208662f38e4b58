//! Finite simplicial complexes, alternating (co)chains and their (co)homology,
//! simplicial maps, nerves, barycentric subdivision and neighbourhood pairs.

mod chain;
mod complex;
mod duality;
mod maps;
mod nerve;
mod subdivision;

pub use chain::{boundary_matrix, cohomology, homology, ChainComplexZ};
pub use complex::{Label, Simplex, SimplicialComplex};
pub use duality::{duality_check, DegreeComparison, DualityLevel, DualityReport};
pub use maps::{induced_map, induced_map_with, SimplicialMap, Variance};
pub use nerve::{nerve, star_cover};
pub use subdivision::{
    barycentric_subdivision, iterated_subdivision, neighborhood_pair, NeighborhoodPair, Subdivision,
};
