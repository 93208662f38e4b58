//! Homology and cohomology of simplicial complexes, nerves and barycentric subdivision.

use prolim::simplicial::{barycentric_subdivision, cohomology, homology, nerve, SimplicialComplex};

fn table(name: &str, k: &SimplicialComplex) {
    let top = k.dim().unwrap_or(0);
    let h: Vec<String> = (0..=top)
        .map(|n| format!("H_{n} = {}", homology(k, n, false)))
        .collect();
    let c: Vec<String> = (0..=top)
        .map(|n| format!("H^{n} = {}", cohomology(k, n, false)))
        .collect();
    println!("{name}: {}", h.join(", "));
    println!("{:width$}  {}", "", c.join(", "), width = name.len());
}

fn main() {
    for d in 1..=4 {
        table(&format!("S^{d}"), &SimplicialComplex::sphere(d));
    }
    table("octahedron", &SimplicialComplex::octahedron());
    table("RP^2", &SimplicialComplex::projective_plane());

    let cover = vec![vec!['a', 'b'], vec!['b', 'c'], vec!['c', 'a']];
    let n = nerve(&cover).unwrap();
    table("nerve of a 3-set circle cover", &n);

    let sd = barycentric_subdivision(&SimplicialComplex::projective_plane());
    println!("subdivided RP^2 has {} vertices", sd.complex.vertices().len());
    table("sd RP^2", &sd.complex);
    println!(
        "reduced H_0(S^0) = {}",
        homology(&SimplicialComplex::sphere(0), 0, true)
    );
}
