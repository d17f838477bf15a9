//! Validate a composite projection system and a rotating family over it,
//! then corrupt one distance and replay the produced witness.

use artin_hhs::projection::{
    cps_check, crf_check, parse_cps, parse_crf, replay_cps_witness, Verdict,
};

// two clusters {x,z} and {a,b} sitting far apart as seen from y
const TABLE: &str = "\
colour 1 y x z a b
theta 1
dist y x a 10
dist y a x 10
dist y x b 10
dist y b x 10
dist y z a 10
dist y a z 10
dist y z b 10
dist y b z 10
";

// the permutation g swaps the clusters wholesale and generates the
// rotation subgroup at y
const FAMILY: &str = "\
perm g (x a) (z b)
gamma y g
thetarot 10
";

fn main() {
    let cps = parse_cps(TABLE).unwrap();
    let report = cps_check(&cps);
    println!("projection axioms ({} points):", cps.point_count());
    for row in &report.axioms {
        println!("  {}: {:?}", row.axiom, row.verdict);
    }

    let crf = parse_crf(&format!("{TABLE}{FAMILY}")).unwrap();
    let family_report = crf_check(&crf);
    println!("rotating family axioms:");
    for row in &family_report.axioms {
        println!("  {}: {:?}", row.axiom, row.verdict);
    }

    // break symmetry: d_y(x,a) and d_y(a,x) now disagree
    let broken = parse_cps(&TABLE.replace("dist y a x 10", "dist y a x 4")).unwrap();
    let broken_report = cps_check(&broken);
    let row = broken_report
        .axioms
        .iter()
        .find(|a| a.verdict == Verdict::Fail)
        .expect("the corrupted table fails an axiom");
    let witness = row.witness.as_ref().unwrap();
    println!(
        "\ncorrupted table: {} fails, witness replays: {}",
        row.axiom,
        replay_cps_witness(&broken, witness)
    );
}
