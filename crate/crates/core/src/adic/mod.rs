//! Digit arithmetic in `Z_a` and in completions of `Z^d` along lattice chains,
//! and dual lattices.

mod chain;
mod dual;
mod integer;

pub use chain::{digit_sets, odometer_step, profinite_add, profinite_reduce, DigitSet, LatticeChain, ProfiniteElement};
pub(crate) use dual::cofactors;
pub use dual::{dual_lattice, DualLatticeResult, RationalEntry, RationalLattice};
pub use integer::{solve_divisibility, AdicInteger, AdicTail, Divisibility};
