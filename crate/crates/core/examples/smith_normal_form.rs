//! Smith normal form, integer linear systems and the stable sublattice of a matrix.

use num_bigint::BigInt;
use prolim::fgab::{smith_normal_form, solve_linear, stable_sublattice, FgGroup, IntMatrix};

fn main() {
    let a = IntMatrix::from_i64(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
    let f = smith_normal_form(&a);
    println!("A =\n{a}");
    println!("S = U A V =\n{}", f.s);
    println!("U =\n{}\nV =\n{}", f.u, f.v);
    assert_eq!(f.u.mul(&a).unwrap().mul(&f.v).unwrap(), f.s);
    let inv: Vec<String> = f.invariants.iter().map(|d| d.to_string()).collect();
    println!("invariant factors: {}", inv.join(" | "));

    let rel = IntMatrix::from_i64(&[[2, 0, 4], [0, 6, 6]]);
    println!(
        "Z^2 / columns of {:?} = {}",
        rel.to_i64_rows().unwrap(),
        FgGroup::from_presentation(&rel)
    );

    let b: Vec<BigInt> = [2, 6, 10].map(BigInt::from).to_vec();
    match solve_linear(&a, &b).unwrap() {
        Some(x) => println!("A x = (2, 6, 10) has the integer solution {x:?}"),
        None => println!("A x = (2, 6, 10) has no integer solution"),
    }
    let b: Vec<BigInt> = [1, 0, 0].map(BigInt::from).to_vec();
    println!(
        "A x = (1, 0, 0) solvable over Z: {}",
        solve_linear(&a, &b).unwrap().is_some()
    );

    for m in [
        IntMatrix::diag(&[2, 3]),
        IntMatrix::diag(&[2, 1]),
        IntMatrix::from_i64(&[[1, 1], [1, 2]]),
        IntMatrix::from_i64(&[[2, 1], [0, 1]]),
    ] {
        let l = stable_sublattice(&m).unwrap();
        println!(
            "∩ M^n Z^2 for M = {:?}: rank {}, basis {:?}",
            m.to_i64_rows().unwrap(),
            l.rank(),
            l.basis_rows()
        );
    }
}
