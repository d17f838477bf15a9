//! Emit the presentation family attached to one defining graph: the Artin
//! group, its Shephard quotient, the hyperbolic quotient, and a kernel
//! given by filling chosen periodic directions.

use artin_hhs::graph::parse_graph;
use artin_hhs::presentation::{
    abelianization, artin_presentation, hyperbolic_quotient_presentation, kernel_presentation,
    shephard_presentation, KernelClass, KernelSpec,
};

fn main() {
    let g = parse_graph(
        "vertex a\nvertex b\nvertex c\nedge a b 3\nedge b c 4\nedge a c 5\n",
    )
    .unwrap();

    let artin = artin_presentation(&g);
    println!("== Artin\n{}", artin.serialize());
    let ab = abelianization(&artin);
    println!(
        "abelianisation: free rank {}, torsion {:?}",
        ab.free_rank, ab.invariant_factors
    );

    println!("\n== Shephard, exponent 3\n{}", shephard_presentation(&g, 3).unwrap().serialize());

    println!(
        "\n== hyperbolic quotient, multiplier 2\n{}",
        hyperbolic_quotient_presentation(&g, 2).unwrap().serialize()
    );

    // fill only the odd component of a (all generators are conjugate here)
    // and the dihedral direction of the edge {b,c}
    let b = g.require_vertex("b").unwrap();
    let c = g.require_vertex("c").unwrap();
    let spec = KernelSpec {
        classes: vec![
            (KernelClass::Component(g.require_vertex("a").unwrap()), 4),
            (KernelClass::Dihedral(b, c), 2),
        ],
    };
    println!(
        "\n== partial filling\n{}",
        kernel_presentation(&g, &spec).unwrap().serialize()
    );
}
