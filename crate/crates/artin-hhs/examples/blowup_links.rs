//! Walk the simplices of a squid blowup: classify each link, then compare
//! the classes of two simplices through the nesting/orthogonality relation.

use artin_hhs::blowup::{parse_blowup, LinkClass};

const BLOWUP: &str = "\
vertex v
vertex w
edge v w
leaf v x1
leaf v x2
leaf w y
";

fn main() {
    let (x, _) = parse_blowup(BLOWUP).unwrap();

    println!("blowup on {} vertices", x.x_count());
    for class in x.simplex_classes() {
        let rep = class.representative();
        if x.is_maximal(rep) {
            continue;
        }
        let shape = match x.classify_simplex_link(rep).unwrap() {
            LinkClass::Empty => "empty simplex".to_string(),
            LinkClass::EdgeType => "edge-type".to_string(),
            LinkClass::TriangleType => "triangle-type".to_string(),
            LinkClass::Maximal => "maximal".to_string(),
            LinkClass::Bounded { diameter: Some(d) } => format!("bounded, diameter {d}"),
            LinkClass::Bounded { diameter: None } => "bounded, disconnected".to_string(),
        };
        println!("{}  {shape}", x.simplex_display(rep));
    }

    // the leaf set of v and the edge class at v have orthogonal links;
    // the leaf set of v nests into the edge class of its neighbour
    let leaf_set_v = x.simplex_by_names(&["w", "y", "v"]).unwrap();
    let edge_at_v = x.simplex_by_names(&["v", "x1"]).unwrap();
    let edge_at_w = x.simplex_by_names(&["w", "y"]).unwrap();
    println!(
        "\nleaf set of v vs edge class at v: {:?}",
        x.relation(&leaf_set_v, &edge_at_v).unwrap()
    );
    println!(
        "leaf set of v vs edge class at w: {:?}",
        x.relation(&leaf_set_v, &edge_at_w).unwrap()
    );
}
