//! Trivial homomorphisms between completions of `Z^d` along lattice chains:
//! continuity certificates, bounded enumeration, conjugacy of odometers and
//! orbits of the induced maps on the quotient by `Z^d`.

mod conjugacy;
mod hom;
mod orbit;

pub use conjugacy::{chains_conjugate, CofinalityWitness, ConjugacyReport, Verdict};
pub use hom::{
    compose, continuity_check, enumerate_trivial_homs, homotopic, search_horizon, CertifiedHom, Continuity,
    Enumeration, Multiplier, TrivialHom,
};
pub use orbit::{apply_hom, apply_hom_orbit, coset_zero, OrbitReport, RationalCoset};
