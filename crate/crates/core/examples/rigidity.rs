//! Continuous homomorphisms between odometer groups, conjugacy of lattice chains and orbits
//! of rational points.

use num_rational::BigRational;
use prolim::adic::LatticeChain;
use prolim::rigidity::{apply_hom_orbit, chains_conjugate, enumerate_trivial_homs};
use prolim::steinitz::{DivisorSequence, DEFAULT_PRIME_BOUND};

fn chain(p: u64) -> LatticeChain {
    LatticeChain::from_divisors(&DivisorSequence::powers(p))
}

fn main() {
    let e = enumerate_trivial_homs(&chain(2), &chain(3), 8, 20).unwrap();
    println!(
        "2-adic → 3-adic: {} candidates, {} certified classes",
        e.candidates,
        e.multipliers().len()
    );

    let e = enumerate_trivial_homs(&chain(2), &chain(2), 6, 2).unwrap();
    let ms: Vec<String> = e.multipliers().iter().map(|m| m.to_string()).collect();
    println!("2-adic → 2-adic multipliers: {}", ms.join(", "));

    for (a, b) in [(2, 4), (2, 3), (6, 6)] {
        let r = chains_conjugate(&chain(a), &chain(b), 8, 1, DEFAULT_PRIME_BOUND).unwrap();
        println!("{a}-powers vs {b}-powers: {:?}", r.verdict);
    }

    let homs: Vec<_> = e.homs.iter().map(|h| h.hom.clone()).take(3).collect();
    let x = vec![BigRational::new(1.into(), 5.into())];
    let orbit = apply_hom_orbit(&homs, &chain(2), &x, 10).unwrap();
    let shown: Vec<String> = orbit.elements.iter().map(|c| c.to_string()).collect();
    println!(
        "orbit of 1/5 under {} homs: {} cosets, closed {}",
        homs.len(),
        orbit.size,
        orbit.closed
    );
    println!("  {}", shown.join(", "));
}
