//! Exact four-point hyperbolicity constants for some familiar graphs and
//! for the augmented graph of a blowup.

use artin_hhs::blowup::{augmented_graph, hyperbolicity_delta, parse_blowup};
use artin_hhs::simple::SimpleGraph;

fn cycle(n: usize) -> SimpleGraph {
    let mut g = SimpleGraph::new(n);
    for v in 0..n {
        g.add_edge(v, (v + 1) % n);
    }
    g
}

fn main() {
    for n in [4usize, 5, 6, 8, 12] {
        println!("cycle on {n}: delta = {}", hyperbolicity_delta(&cycle(n)));
    }

    let mut tree = SimpleGraph::new(7);
    for (a, b) in [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5), (5, 6)] {
        tree.add_edge(a, b);
    }
    println!("a tree is 0-hyperbolic: delta = {}", hyperbolicity_delta(&tree));

    let (x, w) = parse_blowup(
        "vertex a\nvertex b\nvertex c\nvertex d\nedge a b\nedge b c\nedge c d\n\
         leaf a p\nleaf b q\nleaf c r\nleaf d s\n",
    )
    .unwrap();
    let augmented = augmented_graph(&x, &w);
    println!(
        "augmented blowup of a 4-path ({} vertices): delta = {}",
        augmented.n(),
        hyperbolicity_delta(&augmented)
    );
}
