//! Steenrod homology of the dyadic solenoid through the Milnor sequence, and the limits
//! of a few towers of groups.

use prolim::fgab::{FgGroup, IntMatrix};
use prolim::towers::{lim1_of, lim_of, milnor_homology, polygon_tower, LimitOptions, Tower};

fn main() {
    let ct = polygon_tower(8).unwrap();
    let opts = LimitOptions::default();
    for n in 0..=1 {
        let d = milnor_homology(&ct, n, true, &opts).unwrap();
        println!("degree {n}");
        println!("  weak part:       {}", serde_json::to_string(&d.weak).unwrap());
        println!("  asymptotic part: {}", serde_json::to_string(&d.asymptotic).unwrap());
        if let Some(h0) = d.h0 {
            println!("  H_0 = {}", h0.structure_string());
        }
    }

    let towers = [
        ("Z ←×2 Z ← ...", Tower::multiplication(2)),
        (
            "Z^2 with diag(2, 1)",
            Tower::periodic(FgGroup::free(2), vec![IntMatrix::diag(&[2, 1])]).unwrap(),
        ),
        (
            "Z^2 with [[1,1],[1,2]]",
            Tower::periodic(FgGroup::free(2), vec![IntMatrix::from_i64(&[[1, 1], [1, 2]])]).unwrap(),
        ),
    ];
    for (name, t) in towers {
        println!("{name}");
        println!("  lim  = {}", serde_json::to_string(&lim_of(&t).unwrap()).unwrap());
        println!("  lim1 = {}", serde_json::to_string(&lim1_of(&t).unwrap()).unwrap());
    }
}
