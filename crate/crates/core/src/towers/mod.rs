//! Towers of finitely generated abelian groups: limits, derived limits, the
//! shift map and Milnor sequences.

mod e0;
mod limits;
mod milnor;
mod six_term;
mod tower;

pub use e0::{digits, e0_reduce, eta, CosetChain};
pub use limits::{
    kunneth_torus, lim1_of, lim1_of_with, lim_of, lim_of_with, n_lattice, n_subgroup, Certificate, Lim1Descriptor,
    LimDescriptor, LimitOptions, NSubgroup, ProChain, ShiftWitness,
};
pub use milnor::{
    milnor_cohomology, milnor_from_towers, milnor_homology, milnor_roundtrip, polygon_tower, ComplexTail, ComplexTower,
    MilnorDescriptor, RoundTripReport, RoundTripSample,
};
pub use six_term::{canonical_sequence, six_term, SampleCheck, SequenceCheck, SixTermReport, TowerSequence};
pub use tower::{shift_apply, shift_solve, ElementTail, Tail, Tower, TowerElement};
