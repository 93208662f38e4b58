//! Dual lattices of superlattices of Z^d.

use num_rational::BigRational;
use prolim::adic::dual_lattice;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn main() {
    let cases = vec![
        (1, vec![vec![q(1, 6)]]),
        (2, vec![vec![q(1, 2), q(1, 2)]]),
        (2, vec![vec![q(1, 3), q(0, 1)], vec![q(0, 1), q(1, 4)]]),
        (
            3,
            vec![vec![q(1, 2), q(1, 3), q(0, 1)], vec![q(0, 1), q(1, 2), q(1, 2)]],
        ),
    ];
    for (d, extra) in cases {
        let mut gens: Vec<Vec<BigRational>> = (0..d)
            .map(|i| (0..d).map(|j| q((i == j) as i64, 1)).collect())
            .collect();
        gens.extend(extra.iter().cloned());
        let shown: Vec<Vec<String>> = extra
            .iter()
            .map(|g| g.iter().map(|x| x.to_string()).collect())
            .collect();
        let r = dual_lattice(d, &gens).unwrap();
        println!("A = Z^{d} + {shown:?}");
        println!("  A* basis {:?}", r.lattice.basis_rows());
        println!("  [A : Z^{d}] = {}, [Z^{d} : A*] = {}", r.superlattice_index, r.index);
        println!("  pairing integral {}, (A*)* = A {}", r.pairing_ok, r.involution_ok);
    }
}
