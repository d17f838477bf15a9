//! Random labelled graphs with uniform labels from {∞, 2, …, f(n)} and
//! Monte Carlo estimation of how often classification predicates hold.
//!
//! Each trial draws from its own counter-keyed stream of a ChaCha
//! generator, so estimates are a pure function of (seed, trials, n, f)
//! regardless of worker count or execution order.

use crate::classify::{hopf_verdict, odd_decomposition, type_flags, Outcome};
use crate::graph::LabelledGraph;
use crate::simple::SimpleGraph;
use num_rational::Rational64;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RandomError {
    #[error("label pool needs f >= 2")]
    FrequencyTooSmall,
    #[error("at least one trial required")]
    ZeroTrials,
    #[error("at least one vertex required")]
    ZeroVertices,
    #[error("edge probability must lie in [0, 1]")]
    ProbabilityRange,
    #[error("sweep config line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("sweep config is missing `{0}`")]
    MissingKey(&'static str),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("frequency expression evaluates out of range at n = {0}")]
    FrequencyOverflow(usize),
}

/// The sampling model: a complete graph on `n` vertices whose edges
/// independently draw a label from {∞, 2, …, f(n)} uniformly; drawing ∞
/// deletes the edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModelConfig {
    pub n: usize,
    pub f_of_n: u32,
    pub seed: u64,
    pub trials: u64,
}

impl ModelConfig {
    pub fn new(n: usize, f_of_n: u32, seed: u64, trials: u64) -> Result<Self, RandomError> {
        if n < 1 {
            return Err(RandomError::ZeroVertices);
        }
        if f_of_n < 2 {
            return Err(RandomError::FrequencyTooSmall);
        }
        if trials < 1 {
            return Err(RandomError::ZeroTrials);
        }
        Ok(ModelConfig {
            n,
            f_of_n,
            seed,
            trials,
        })
    }
}

/// One graph from the model; a pure function of (seed, trial).
pub fn sample_graph(cfg: &ModelConfig, trial: u64) -> LabelledGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial);
    let mut g = LabelledGraph::new();
    let ids: Vec<_> = (1..=cfg.n)
        .map(|i| g.add_vertex(&format!("v{i}")).unwrap())
        .collect();
    for i in 0..cfg.n {
        for j in i + 1..cfg.n {
            // 0 plays the role of ∞; k >= 1 is the label k + 1
            let draw = rng.gen_range(0..cfg.f_of_n);
            if draw != 0 {
                g.add_edge(ids[i], ids[j], draw + 1).unwrap();
            }
        }
    }
    g
}

/// Probability that a single edge draws an odd label: the pool holds
/// f(n) entries of which ⌊(f(n)−1)/2⌋ are odd (the odd numbers in
/// [3, f(n)]).
pub fn odd_edge_probability(f_of_n: u32) -> Rational64 {
    assert!(f_of_n >= 2, "label pool needs f >= 2");
    Rational64::new(((f_of_n - 1) / 2) as i64, f_of_n as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    Large,
    Hyperbolic,
    ExtraLarge,
    SingleOddComponent,
    TheoremApplicable,
    HopfVerdictHopfian,
}

impl Predicate {
    pub const ALL: [Predicate; 6] = [
        Predicate::Large,
        Predicate::Hyperbolic,
        Predicate::ExtraLarge,
        Predicate::SingleOddComponent,
        Predicate::TheoremApplicable,
        Predicate::HopfVerdictHopfian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Large => "large",
            Predicate::Hyperbolic => "hyperbolic",
            Predicate::ExtraLarge => "extra_large",
            Predicate::SingleOddComponent => "single_odd_component",
            Predicate::TheoremApplicable => "theorem_applicable",
            Predicate::HopfVerdictHopfian => "hopf_verdict_hopfian",
        }
    }

    pub fn parse(s: &str) -> Option<Predicate> {
        Predicate::ALL.into_iter().find(|p| p.name() == s)
    }

    pub fn holds(self, g: &LabelledGraph) -> bool {
        match self {
            Predicate::Large => type_flags(g).large,
            Predicate::Hyperbolic => type_flags(g).hyperbolic,
            Predicate::ExtraLarge => type_flags(g).extra_large,
            Predicate::SingleOddComponent => odd_decomposition(g).component_count() == 1,
            // the criterion's hypotheses, restated flat: label and
            // triangle conditions plus no forbidden hanging singleton
            Predicate::TheoremApplicable => {
                let flags = type_flags(g);
                flags.large && flags.hyperbolic && odd_decomposition(g).hanging_ok()
            }
            Predicate::HopfVerdictHopfian => {
                matches!(hopf_verdict(g).outcome, Outcome::Hopfian)
            }
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Monte Carlo estimate with a normal-approximation 95% half-width.
/// The normal interval degenerates near 0 and 1, so the Wilson score
/// interval is carried alongside.
#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub predicate: String,
    pub hits: u64,
    pub trials: u64,
    pub estimate: f64,
    pub half_width: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub seed: u64,
}

const Z95: f64 = 1.96;

impl EstimateReport {
    fn from_hits(predicate: &str, hits: u64, trials: u64, seed: u64) -> EstimateReport {
        let n = trials as f64;
        let p = hits as f64 / n;
        let half_width = Z95 * (p * (1.0 - p) / n).sqrt();
        let denom = 1.0 + Z95 * Z95 / n;
        let centre = (p + Z95 * Z95 / (2.0 * n)) / denom;
        let spread =
            Z95 / denom * (p * (1.0 - p) / n + Z95 * Z95 / (4.0 * n * n)).sqrt();
        EstimateReport {
            predicate: predicate.to_string(),
            hits,
            trials,
            estimate: p,
            half_width,
            wilson_low: (centre - spread).max(0.0),
            wilson_high: (centre + spread).min(1.0),
            seed,
        }
    }

    pub fn standard_error(&self) -> f64 {
        (self.estimate * (1.0 - self.estimate) / self.trials as f64).sqrt()
    }
}

/// Fraction of sampled graphs satisfying the predicate. Trials run in
/// parallel; the per-trial streams make the count order-independent.
pub fn genericity_estimate(cfg: &ModelConfig, predicate: Predicate) -> EstimateReport {
    let hits = (0..cfg.trials)
        .into_par_iter()
        .filter(|&trial| predicate.holds(&sample_graph(cfg, trial)))
        .count() as u64;
    EstimateReport::from_hits(predicate.name(), hits, cfg.trials, cfg.seed)
}

/// Connectivity rate of the Erdős–Rényi graph G(n, p), with edges drawn
/// by exact rational comparison so p = 0 and p = 1 are exact.
pub fn er_connectivity_estimate(
    n: usize,
    p: Rational64,
    trials: u64,
    seed: u64,
) -> Result<EstimateReport, RandomError> {
    if n < 1 {
        return Err(RandomError::ZeroVertices);
    }
    if trials < 1 {
        return Err(RandomError::ZeroTrials);
    }
    if p < Rational64::zero() || p > Rational64::one() {
        return Err(RandomError::ProbabilityRange);
    }
    let numer = *p.numer() as u64;
    let denom = *p.denom() as u64;
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let mut g = SimpleGraph::new(n);
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_range(0..denom) < numer {
                        g.add_edge(i, j);
                    }
                }
            }
            g.is_connected()
        })
        .count() as u64;
    Ok(EstimateReport::from_hits("er_connectivity", hits, trials, seed))
}

/// How f scales with n in a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FrequencyExpr {
    N,
    TwoN,
    NSquared,
    Const(u32),
}

impl FrequencyExpr {
    pub fn parse(s: &str) -> Option<FrequencyExpr> {
        match s {
            "n" => Some(FrequencyExpr::N),
            "2n" => Some(FrequencyExpr::TwoN),
            "n^2" => Some(FrequencyExpr::NSquared),
            _ => s.parse::<u32>().ok().map(FrequencyExpr::Const),
        }
    }

    pub fn eval(self, n: usize) -> Result<u32, RandomError> {
        let wide = match self {
            FrequencyExpr::N => n as u64,
            FrequencyExpr::TwoN => 2 * n as u64,
            FrequencyExpr::NSquared => (n as u64) * (n as u64),
            FrequencyExpr::Const(k) => k as u64,
        };
        u32::try_from(wide).map_err(|_| RandomError::FrequencyOverflow(n))
    }
}

impl fmt::Display for FrequencyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrequencyExpr::N => f.write_str("n"),
            FrequencyExpr::TwoN => f.write_str("2n"),
            FrequencyExpr::NSquared => f.write_str("n^2"),
            FrequencyExpr::Const(k) => write!(f, "{k}"),
        }
    }
}

/// A sweep runs every predicate at every n. Config lines (newlines and
/// semicolons both separate):
///
/// ```text
/// n = 5 10 20
/// f = n            # or 2n, n^2, or a constant
/// trials = 10000
/// seed = 1
/// predicates = single_odd_component theorem_applicable
/// ```
///
/// `predicates` defaults to all six.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub ns: Vec<usize>,
    pub f: FrequencyExpr,
    pub trials: u64,
    pub seed: u64,
    pub predicates: Vec<Predicate>,
}

pub fn parse_sweep(text: &str) -> Result<SweepConfig, RandomError> {
    let mut ns = None;
    let mut f = None;
    let mut trials = None;
    let mut seed = None;
    let mut predicates = None;
    for (lineno, rawline) in text.replace(';', "\n").lines().enumerate() {
        let line = lineno + 1;
        let content = rawline.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(RandomError::Syntax {
                line,
                msg: "expected `key = value`".to_string(),
            });
        };
        let value = value.trim();
        let items: Vec<&str> = value
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .collect();
        let bad = |msg: &str| RandomError::Syntax {
            line,
            msg: msg.to_string(),
        };
        match key.trim() {
            "n" => {
                let list: Vec<usize> = items
                    .iter()
                    .map(|s| s.parse().map_err(|_| bad("bad vertex count")))
                    .collect::<Result<_, _>>()?;
                if list.is_empty() {
                    return Err(bad("n needs at least one value"));
                }
                ns = Some(list);
            }
            "f" => {
                if items.len() != 1 {
                    return Err(bad("f takes one expression"));
                }
                f = Some(
                    FrequencyExpr::parse(items[0])
                        .ok_or_else(|| bad("f must be n, 2n, n^2 or a constant"))?,
                );
            }
            "trials" => {
                if items.len() != 1 {
                    return Err(bad("trials takes one value"));
                }
                trials = Some(items[0].parse().map_err(|_| bad("bad trial count"))?);
            }
            "seed" => {
                if items.len() != 1 {
                    return Err(bad("seed takes one value"));
                }
                seed = Some(items[0].parse().map_err(|_| bad("bad seed"))?);
            }
            "predicates" => {
                let list: Vec<Predicate> = items
                    .iter()
                    .map(|s| {
                        Predicate::parse(s)
                            .ok_or_else(|| RandomError::UnknownPredicate(s.to_string()))
                    })
                    .collect::<Result<_, _>>()?;
                predicates = Some(list);
            }
            other => {
                return Err(RandomError::Syntax {
                    line,
                    msg: format!("unknown key `{other}`"),
                });
            }
        }
    }
    Ok(SweepConfig {
        ns: ns.ok_or(RandomError::MissingKey("n"))?,
        f: f.ok_or(RandomError::MissingKey("f"))?,
        trials: trials.ok_or(RandomError::MissingKey("trials"))?,
        seed: seed.ok_or(RandomError::MissingKey("seed"))?,
        predicates: predicates.unwrap_or_else(|| Predicate::ALL.to_vec()),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub f: u32,
    #[serde(flatten)]
    pub report: EstimateReport,
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, RandomError> {
    let mut rows = Vec::new();
    for &n in &cfg.ns {
        let f = cfg.f.eval(n)?;
        let model = ModelConfig::new(n, f, cfg.seed, cfg.trials)?;
        for &p in &cfg.predicates {
            rows.push(SweepRow {
                n,
                f,
                report: genericity_estimate(&model, p),
            });
        }
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "n,f,predicate,hits,trials,estimate,half_width,wilson_low,wilson_high,seed\n",
    );
    for row in rows {
        let r = &row.report;
        out.push_str(&format!(
            "{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{}\n",
            row.n,
            row.f,
            r.predicate,
            r.hits,
            r.trials,
            r.estimate,
            r.half_width,
            r.wilson_low,
            r.wilson_high,
            r.seed
        ));
    }
    out
}
