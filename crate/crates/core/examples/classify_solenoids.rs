//! Classifying one-dimensional solenoids up to homeomorphism and up to Steenrod homology.

use prolim::steinitz::{classify_pair, family_same_steenrod, DivisorSequence, DEFAULT_PRIME_BOUND};

fn main() {
    let seq = |p: &[i64], c: &[i64]| DivisorSequence::from_i64(p, c).unwrap();
    let pairs = [
        (DivisorSequence::powers(2), DivisorSequence::powers(3)),
        (seq(&[1, 3], &[2]), seq(&[1, 9], &[2])),
        (DivisorSequence::powers(2), DivisorSequence::powers(4)),
        (DivisorSequence::powers(6), seq(&[1], &[2, 3])),
    ];
    for (a, b) in &pairs {
        let c = classify_pair(a, b, DEFAULT_PRIME_BOUND).unwrap();
        println!("{a} vs {b}");
        println!("  supernatural {} vs {}", c.supernatural.0, c.supernatural.1);
        println!(
            "  homeomorphic {}, Steenrod isomorphic {}, Baer equivalent {}",
            c.homeomorphic, c.steenrod_isomorphic, c.baer_equivalent
        );
        println!("  H_0 = {}", c.h0.0.structure_string());
    }

    let fam = family_same_steenrod(5, 2).unwrap();
    println!("five solenoids with the same Steenrod homology:");
    for a in &fam {
        println!("  {a}");
    }
    for i in 0..fam.len() {
        for j in i + 1..fam.len() {
            let c = classify_pair(&fam[i], &fam[j], DEFAULT_PRIME_BOUND).unwrap();
            assert!(c.steenrod_isomorphic && !c.homeomorphic);
        }
    }
    println!("all 10 pairs: Steenrod isomorphic, not homeomorphic");
}
