//! Build the bipartite product region graph of a defining graph, test
//! discreteness after removing vertex classes, and query the rank of
//! stabiliser images in the abelianisation.

use artin_hhs::classify::{
    product_region_graph, stabilizer_image_rank, PrNode, RankBound, StabilizerTarget,
};
use artin_hhs::graph::parse_graph;

fn main() {
    let g = parse_graph(
        "vertex a\nvertex b\nvertex c\nedge a b 3\nedge b c 4\nedge a c 5\n",
    )
    .unwrap();
    let pr = product_region_graph(&g).unwrap();

    println!("{}", pr.to_dot(&g));
    println!(
        "components: {}, dihedral regions: {}, adjacencies: {}",
        pr.components().len(),
        pr.dihedrals().len(),
        pr.edges().len()
    );

    // a single odd component touches every dihedral region, so nothing
    // short of removing it disconnects the graph into isolated nodes
    let untouched = pr.discrete_after_removal(&[]).unwrap();
    let removed = pr.discrete_after_removal(&[PrNode::Component(0)]).unwrap();
    println!("discrete as built: {untouched}");
    println!("discrete after removing the only component class: {removed}");

    let a = g.require_vertex("a").unwrap();
    let b = g.require_vertex("b").unwrap();
    for (label, target) in [
        ("dihedral region on {a,b}", StabilizerTarget::Dihedral(a, b)),
        ("centraliser of a", StabilizerTarget::Centralizer(a)),
    ] {
        match stabilizer_image_rank(&g, target).unwrap() {
            RankBound::Exact(r) => println!("{label}: image rank {r}"),
            RankBound::AtLeast(r) => println!("{label}: image rank at least {r}"),
        }
    }
}
