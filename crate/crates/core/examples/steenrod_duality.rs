//! Level-wise duality between a subcomplex of a sphere and its complement, checked on
//! iterated barycentric subdivisions.

use prolim::simplicial::{duality_check, Label, SimplicialComplex};

fn report(name: &str, sphere: &SimplicialComplex, x: &SimplicialComplex) {
    let r = duality_check(sphere, x, 2).unwrap();
    println!("{name} (ambient S^{})", r.n + 1);
    for (depth, level) in r.levels.iter().enumerate() {
        for d in &level.degrees {
            println!(
                "  depth {depth}, k = {}: H^k(T) = {}, H_k(L, T) = {}, H~_(n-k)(X) = {}, agree {}",
                d.k, d.complement_cohomology, d.neighborhood_homology, d.subcomplex_homology, d.agree
            );
        }
    }
    println!("  first agreement at depth {:?}", r.agreed_at);
}

fn main() {
    let l = |s: &str| Label::from(s);
    let equator = SimplicialComplex::new(
        vec![l("+x"), l("+y"), l("-x"), l("-y")],
        vec![
            vec![l("+x"), l("+y")],
            vec![l("+y"), l("-x")],
            vec![l("-x"), l("-y")],
            vec![l("-y"), l("+x")],
        ],
    )
    .unwrap();
    report("equator in the octahedron", &SimplicialComplex::octahedron(), &equator);

    let two_points = SimplicialComplex::from_indices(2, vec![vec![0], vec![1]]);
    report(
        "two vertices of the tetrahedron boundary",
        &SimplicialComplex::sphere(2),
        &two_points,
    );
}
