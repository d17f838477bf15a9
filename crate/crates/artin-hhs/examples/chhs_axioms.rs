//! Run the four combinatorial HHS axiom checks over a blowup: chain
//! complexity, hyperbolic augmented links, containers, fullness.

use artin_hhs::blowup::{chhs_check, parse_blowup};
use num_rational::Rational64;

const BLOWUP: &str = "\
vertex v
vertex w
edge v w
leaf v x1
leaf v x2
leaf w y
wedge (v:x1,w:y) (v:x2,w:y)
";

fn main() {
    let (x, w) = parse_blowup(BLOWUP).unwrap();
    let report = chhs_check(&x, &w, Rational64::from_integer(2), 25);

    println!(
        "link chains: max {} against bound {} -> {}",
        report.max_chain,
        report.complexity_bound,
        if report.complexity_ok { "ok" } else { "FAIL" }
    );
    for step in &report.chain_witness {
        println!("  {step}");
    }
    println!(
        "link hyperbolicity: max delta {} against bound {} -> {}",
        report.max_link_delta,
        report.delta_bound,
        if report.hyperbolicity_ok { "ok" } else { "FAIL" }
    );
    println!("distortion (reported): {}", report.max_distortion);
    println!(
        "containers: {} ({} failures)",
        if report.containers_ok { "ok" } else { "FAIL" },
        report.container_failures.len()
    );
    println!(
        "fullness: {} ({} failures)",
        if report.fullness_ok { "ok" } else { "FAIL" },
        report.fullness_failures.len()
    );
    println!("overall: {}", if report.passed { "pass" } else { "fail" });
}
