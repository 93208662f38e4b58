//! Arithmetic in the a-adic integers, division by primes, and profinite completions of Z^d
//! along a chain of lattices.

use num_bigint::BigInt;
use num_rational::BigRational;
use prolim::adic::{odometer_step, profinite_reduce, solve_divisibility, AdicInteger, LatticeChain};
use prolim::fgab::IntMatrix;
use prolim::steinitz::DivisorSequence;

fn main() {
    let base = DivisorSequence::from_i64(&[1], &[2, 3]).unwrap();
    let k = 8;
    let x = AdicInteger::from_int(&base, -7, k);
    let y = AdicInteger::from_rational(&base, &BigRational::new(1.into(), 5.into()), k).unwrap();
    println!("base {base}, precision {k}");
    println!("-7    = {x}");
    println!("1/5   = {y}");
    println!("-7+1/5 = {}", x.add(&y).unwrap());
    println!("-7·1/5 = {}", x.mul(&y).unwrap());
    println!("-(1/5) = {}", y.neg());

    for q in [2u64, 5, 7] {
        let d = solve_divisibility(&x, q).unwrap();
        println!(
            "-7 / {q}: y = {}, q·y − x = {}, certified {}, reindexed at {:?}",
            d.y, d.integer, d.certified, d.reindexed_at
        );
    }

    let chain = LatticeChain::new(2, vec![], vec![IntMatrix::from_i64(&[[2, 1], [0, 2]])]).unwrap();
    let v: Vec<BigInt> = [3, -1].map(BigInt::from).to_vec();
    let e = profinite_reduce(&v, &chain, 4).unwrap();
    for m in 0..=4 {
        println!("(3, -1) mod r_{m}: {:?}", e.residue(m).unwrap());
    }
    let step: Vec<BigInt> = [1, 0].map(BigInt::from).to_vec();
    let mut o = e.clone();
    for _ in 0..3 {
        o = odometer_step(&o, &step).unwrap();
    }
    println!("after three odometer steps by (1, 0): {:?}", o.residue(4).unwrap());
    println!("integer recovered: {:?}", e.integer_detect().unwrap());
}
