//! The six-term lim/lim¹ sequence of a short exact sequence of towers, the N-subgroup with
//! shift preimages, and the reduction of zero-tail sequences.

use num_bigint::BigInt;
use prolim::fgab::{FgGroup, IntMatrix};
use prolim::steinitz::DivisorSequence;
use prolim::towers::{
    canonical_sequence, e0_reduce, eta, n_subgroup, shift_apply, six_term, LimitOptions, Tower, TowerElement,
};

fn main() {
    let a = DivisorSequence::from_i64(&[1, 3], &[2]).unwrap();
    let opts = LimitOptions::default();
    let r = six_term(&canonical_sequence(&a, opts.depth), 4, 1, &opts).unwrap();
    println!("0 → (Z, ×a) → (Z, id) → (Z/a_n) → 0 for a = {a}");
    for (i, name) in ["A", "B", "C"].iter().enumerate() {
        println!("  lim {name}  = {}", serde_json::to_string(&r.lim[i]).unwrap());
        println!("  lim1 {name} = {}", serde_json::to_string(&r.lim1[i]).unwrap());
    }
    println!("  exactness checks pass: {}", r.all_pass());

    let t = Tower::periodic(FgGroup::from_i64(1, &[4]).unwrap(), vec![IntMatrix::diag(&[2, 1])]).unwrap();
    let n = n_subgroup(&t, 0, 6).unwrap();
    println!(
        "N_0 of Z ⊕ Z/4 under diag(2, 1) is {} generated by {:?}",
        n.group, n.generators
    );
    for w in &n.witnesses {
        println!(
            "  {:?} has a verified shift preimage: {}",
            w.generator,
            w.verify(&t).unwrap()
        );
    }

    let t = Tower::multiplication(2);
    let x = TowerElement::zero_tail(vec![vec![BigInt::from(5)], vec![BigInt::from(-3)]]);
    let b = shift_apply(&t, &x).unwrap();
    for s in 0..3 {
        let lhs = e0_reduce(&t, &b, s, 6).unwrap();
        let rhs = eta(&t, s, &x.coord(s, 1), 6).unwrap();
        println!(
            "t = {s}: reduction {:?}, η {:?}, equal {}",
            lhs.representatives,
            rhs.representatives,
            lhs == rhs
        );
    }
}
