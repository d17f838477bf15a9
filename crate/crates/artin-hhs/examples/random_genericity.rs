//! Estimate how often random defining graphs satisfy each classification
//! predicate, and compare the odd-subgraph connectivity rate against the
//! matching Erdős–Rényi baseline.

use artin_hhs::random::{
    er_connectivity_estimate, genericity_estimate, odd_edge_probability, ModelConfig, Predicate,
};

fn main() {
    let n = 8;
    let trials = 4000;
    let cfg = ModelConfig::new(n, n as u32, 17, trials).unwrap();

    println!("n = {n}, labels drawn uniformly from {{infinity, 2, ..., {n}}}, {trials} trials");
    for predicate in Predicate::ALL {
        let est = genericity_estimate(&cfg, predicate);
        println!(
            "{:<22} {:.4} +- {:.4}  (wilson [{:.4}, {:.4}])",
            predicate.name(),
            est.estimate,
            est.half_width,
            est.wilson_low,
            est.wilson_high
        );
    }

    let p = odd_edge_probability(n as u32);
    let generic = genericity_estimate(&cfg, Predicate::SingleOddComponent);
    let bernoulli = er_connectivity_estimate(n, p, trials, 18).unwrap();
    println!(
        "\nodd subgraph connected: {:.4}; Bernoulli graph with p = {p} connected: {:.4}",
        generic.estimate, bernoulli.estimate
    );
}
