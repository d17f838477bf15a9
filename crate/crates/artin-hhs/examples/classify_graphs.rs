//! Classify a few defining graphs: type flags, odd components, and the
//! Hopf-property verdict with its obstruction report.

use artin_hhs::classify::{hopf_verdict, odd_decomposition, type_flags, HangingKind};
use artin_hhs::graph::parse_graph;

const TRIANGLE: &str = "\
vertex a
vertex b
vertex c
edge a b 3
edge b c 4
edge a c 5
";

// the odd subgraph splits into {a,b,c}, the broad pair {d,e}, the needle
// {f}, and the forbidden singleton {g} of valence two
const ZOO: &str = "\
vertex a
vertex b
vertex c
vertex d
vertex e
vertex f
vertex g
edge a b 3
edge b c 5
edge a c 5
edge d e 3
edge d a 4
edge f b 4
edge g a 4
edge g b 4
";

fn describe(kind: HangingKind) -> &'static str {
    match kind {
        HangingKind::NotHanging => "not hanging",
        HangingKind::Broad => "hanging, broad",
        HangingKind::Needle => "hanging, needle",
        HangingKind::ForbiddenSingleton => "hanging, forbidden singleton",
    }
}

fn main() {
    for (title, text) in [("(3,4,5) triangle", TRIANGLE), ("hanging-component zoo", ZOO)] {
        let g = parse_graph(text).expect("graph text is well-formed");
        let flags = type_flags(&g);
        println!("== {title}");
        println!(
            "large {} | hyperbolic {} | even {} | extra-large {}",
            flags.large, flags.hyperbolic, flags.even, flags.extra_large
        );
        let dec = odd_decomposition(&g);
        for (i, comp) in dec.components().iter().enumerate() {
            let names: Vec<&str> = comp.iter().map(|&v| g.name(v)).collect();
            println!(
                "odd component {{{}}} ({})",
                names.join(","),
                describe(dec.kind(i))
            );
        }
        let verdict = hopf_verdict(&g);
        println!("verdict: {}", verdict.summary());
        for o in &verdict.obstructions {
            println!("  obstruction: {}", o.describe());
        }
        println!();
    }
}
