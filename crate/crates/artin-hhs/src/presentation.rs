//! Finite presentations derived from labelled defining graphs.
//!
//! Words are freely reduced signed-generator sequences; only adjacent
//! inverse pairs are cancelled, at construction time. The text format:
//!
//! ```text
//! gen a b c
//! rel a b a B A B      # capital letter = inverse
//! rel (a b)^6          # parenthesised powers, exponent may be negative
//! ```
//!
//! Presentations built from a graph list braid relators first (edges in
//! declaration order), then any added power relators: vertex powers in
//! declaration order, then edge powers in declaration order.

use crate::graph::{tokens_with_cols, GraphError, LabelledGraph, VertexId};
use crate::classify::odd_decomposition;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: generator {name} declared twice")]
    DuplicateGenerator { line: usize, name: String },
    #[error("line {line}: unknown generator `{name}`")]
    UnknownGenerator { line: usize, name: String },
    #[error("alternating word length must be at least 1")]
    ProdLengthZero,
    #[error("power quotient requires exponent N >= 1")]
    PowerBelowOne,
    #[error("kernel multiplier must be >= 1")]
    MultiplierBelowOne,
    #[error("kernel classes must be pairwise distinct: {0}")]
    DuplicateKernelClass(String),
    #[error("deep-enough divisor must be >= 1")]
    DivisorZero,
    #[error("{0}")]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    fn inv(self) -> Letter {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }
}

/// A freely reduced word in the generators of some presentation.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    /// Builds a word, cancelling adjacent inverse pairs.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            match out.last() {
                Some(&last) if last.gen == l.gen && last.inverse != l.inverse => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.0
            .iter()
            .filter(|l| l.gen == gen)
            .map(|l| if l.inverse { -1 } else { 1 })
            .sum()
    }
}

/// Alternating word `a b a b ...` of length `n` (the left-hand side of a
/// braid relation with label `n`).
pub fn prod_word(a: usize, b: usize, n: u32) -> Result<Word, PresentationError> {
    if n < 1 {
        return Err(PresentationError::ProdLengthZero);
    }
    Ok(Word::from_letters((0..n).map(|i| Letter {
        gen: if i % 2 == 0 { a } else { b },
        inverse: false,
    })))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    gens: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(gens: Vec<String>, relators: Vec<Word>) -> Presentation {
        Presentation { gens, relators }
    }

    pub fn generators(&self) -> &[String] {
        &self.gens
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g == name)
    }

    /// Token form of a letter: the generator name, or for an inverse the
    /// uppercased name when that is unambiguous, else `(name)^-1`.
    fn letter_token(&self, l: Letter) -> String {
        let name = &self.gens[l.gen];
        if !l.inverse {
            return name.clone();
        }
        let upper = name.to_ascii_uppercase();
        if upper != *name
            && upper.to_ascii_lowercase() == *name
            && !self.gens.iter().any(|g| *g == upper)
        {
            upper
        } else {
            format!("({name})^-1")
        }
    }

    pub fn word_string(&self, w: &Word) -> String {
        w.letters()
            .iter()
            .map(|&l| self.letter_token(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        s.push_str("gen ");
        s.push_str(&self.gens.join(" "));
        s.push('\n');
        for r in &self.relators {
            s.push_str("rel ");
            s.push_str(&self.word_string(r));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            generators: self.gens.clone(),
            relators: self.relators.iter().map(|r| self.word_string(r)).collect(),
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

#[derive(Serialize)]
pub struct PresentationJson {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
}

/// One generator per vertex, one braid relator per edge.
pub fn artin_presentation(g: &LabelledGraph) -> Presentation {
    let gens: Vec<String> = g.names().to_vec();
    let relators = braid_relators(g);
    Presentation::new(gens, relators)
}

fn braid_relators(g: &LabelledGraph) -> Vec<Word> {
    g.edges()
        .map(|(a, b, m)| {
            let lhs = prod_word(a.index(), b.index(), m).unwrap();
            let rhs = prod_word(b.index(), a.index(), m).unwrap();
            lhs.concat(&rhs.inverse())
        })
        .collect()
}

fn power_word(gens: &[usize], count: u64) -> Word {
    Word::from_letters(
        std::iter::repeat(gens)
            .take(count as usize)
            .flatten()
            .map(|&g| Letter {
                gen: g,
                inverse: false,
            }),
    )
}

/// Artin relators plus `c^N = 1` for every vertex `c`.
pub fn shephard_presentation(g: &LabelledGraph, n: u32) -> Result<Presentation, PresentationError> {
    if n < 1 {
        return Err(PresentationError::PowerBelowOne);
    }
    let mut relators = braid_relators(g);
    for v in g.vertices() {
        relators.push(power_word(&[v.index()], n as u64));
    }
    Ok(Presentation::new(g.names().to_vec(), relators))
}

/// Artin relators plus `c^N = 1` per vertex and `(ab)^{m_ab N} = 1` per
/// edge: the filling quotient whose added relators kill the periodic
/// directions of vertex and dihedral product regions at depth `N`.
pub fn hyperbolic_quotient_presentation(
    g: &LabelledGraph,
    n: u32,
) -> Result<Presentation, PresentationError> {
    if n < 1 {
        return Err(PresentationError::PowerBelowOne);
    }
    let mut relators = braid_relators(g);
    for v in g.vertices() {
        relators.push(power_word(&[v.index()], n as u64));
    }
    for (a, b, m) in g.edges() {
        relators.push(power_word(&[a.index(), b.index()], m as u64 * n as u64));
    }
    Ok(Presentation::new(g.names().to_vec(), relators))
}

/// A class of periodic directions to fill: either the odd component of a
/// named vertex (filling `s^M` for the component's canonical generator)
/// or a dihedral edge (filling `(ab)^{m_ab M}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelClass {
    Component(VertexId),
    Dihedral(VertexId, VertexId),
}

#[derive(Clone, Debug, Default)]
pub struct KernelSpec {
    pub classes: Vec<(KernelClass, u64)>,
}

impl KernelSpec {
    /// Every odd component and every edge, all with multiplier `m`.
    pub fn full_base(g: &LabelledGraph, m: u64) -> KernelSpec {
        let dec = odd_decomposition(g);
        let mut classes: Vec<(KernelClass, u64)> = dec
            .components()
            .iter()
            .map(|comp| (KernelClass::Component(comp[0]), m))
            .collect();
        classes.extend(g.edges().map(|(a, b, _)| (KernelClass::Dihedral(a, b), m)));
        KernelSpec { classes }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeepEnough {
    divisor: u64,
}

impl DeepEnough {
    pub fn new(divisor: u64) -> Result<DeepEnough, PresentationError> {
        if divisor == 0 {
            return Err(PresentationError::DivisorZero);
        }
        Ok(DeepEnough { divisor })
    }

    pub fn divisor(&self) -> u64 {
        self.divisor
    }
}

/// A filling is deep enough for threshold `D` when every multiplier is a
/// multiple of `D`.
pub fn is_deep_enough(spec: &KernelSpec, deep: &DeepEnough) -> bool {
    spec.classes.iter().all(|&(_, m)| m % deep.divisor == 0)
}

/// Parses a kernel base description against a graph:
///
/// ```text
/// component a 4     # the odd component containing a, multiplier 4
/// dihedral a b 6    # the edge {a,b}, multiplier 6
/// ```
pub fn parse_kernel_spec(
    text: &str,
    g: &LabelledGraph,
) -> Result<KernelSpec, PresentationError> {
    let mut classes = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<(usize, &str)> = tokens_with_cols(content).collect();
        if toks.is_empty() {
            continue;
        }
        let syntax = |col: usize, msg: &str| PresentationError::Syntax {
            line,
            col,
            msg: msg.to_string(),
        };
        let multiplier = |col: usize, s: &str| {
            s.parse::<u64>().map_err(|_| syntax(col, "bad multiplier"))
        };
        match toks[0].1 {
            "component" => {
                if toks.len() != 3 {
                    return Err(syntax(toks[0].0, "component takes a vertex and a multiplier"));
                }
                let v = g.require_vertex(toks[1].1)?;
                classes.push((KernelClass::Component(v), multiplier(toks[2].0, toks[2].1)?));
            }
            "dihedral" => {
                if toks.len() != 4 {
                    return Err(syntax(toks[0].0, "dihedral takes two vertices and a multiplier"));
                }
                let a = g.require_vertex(toks[1].1)?;
                let b = g.require_vertex(toks[2].1)?;
                classes.push((KernelClass::Dihedral(a, b), multiplier(toks[3].0, toks[3].1)?));
            }
            other => {
                return Err(syntax(toks[0].0, &format!("unknown directive `{other}`")));
            }
        }
    }
    Ok(KernelSpec { classes })
}

/// Artin relators plus one power relator per kernel class: `s^{M}` for a
/// component class (`s` = least member of the component in declaration
/// order) and `(ab)^{m_ab M}` for a dihedral class.
pub fn kernel_presentation(
    g: &LabelledGraph,
    spec: &KernelSpec,
) -> Result<Presentation, PresentationError> {
    let dec = odd_decomposition(g);
    let mut seen_components = BTreeSet::new();
    let mut seen_edges = BTreeSet::new();
    let mut relators = braid_relators(g);
    for &(class, m) in &spec.classes {
        if m < 1 {
            return Err(PresentationError::MultiplierBelowOne);
        }
        match class {
            KernelClass::Component(v) => {
                let c = dec.component_of(v);
                if !seen_components.insert(c) {
                    return Err(PresentationError::DuplicateKernelClass(format!(
                        "odd component of {}",
                        g.name(v)
                    )));
                }
                let rep = dec.components()[c][0];
                relators.push(power_word(&[rep.index()], m));
            }
            KernelClass::Dihedral(a, b) => {
                let label = g.label(a, b).ok_or_else(|| {
                    PresentationError::Graph(GraphError::UnknownEdge {
                        a: g.name(a).to_string(),
                        b: g.name(b).to_string(),
                    })
                })?;
                let key = (a.min(b), a.max(b));
                if !seen_edges.insert(key) {
                    return Err(PresentationError::DuplicateKernelClass(format!(
                        "dihedral {} {}",
                        g.name(key.0),
                        g.name(key.1)
                    )));
                }
                relators.push(power_word(&[key.0.index(), key.1.index()], label as u64 * m));
            }
        }
    }
    Ok(Presentation::new(g.names().to_vec(), relators))
}

/// Invariant factors (each > 1, each dividing the next) and free rank of
/// the abelianised presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianStructure {
    pub invariant_factors: Vec<u64>,
    pub free_rank: usize,
}

pub fn abelianization(p: &Presentation) -> AbelianStructure {
    let rows = p.relators.len();
    let cols = p.gens.len();
    let mut m = vec![vec![0i128; cols]; rows];
    for (i, r) in p.relators.iter().enumerate() {
        for (j, row) in m[i].iter_mut().enumerate() {
            *row = r.exponent_sum(j) as i128;
        }
    }
    let diag = smith_normal_diagonal(m, rows, cols);
    let nonzero: Vec<u64> = diag.iter().filter(|&&d| d != 0).map(|&d| d as u64).collect();
    AbelianStructure {
        invariant_factors: nonzero.iter().copied().filter(|&d| d > 1).collect(),
        free_rank: cols - nonzero.len(),
    }
}

/// Diagonal of the Smith normal form (non-negative, divisibility chain).
fn smith_normal_diagonal(mut m: Vec<Vec<i128>>, rows: usize, cols: usize) -> Vec<i128> {
    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // find a pivot of least absolute value in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        // clear row and column t by euclidean reduction
        let mut clean = false;
        while !clean {
            clean = true;
            for i in t + 1..rows {
                if m[i][t] != 0 {
                    let q = m[i][t] / m[t][t];
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                    if m[i][t] != 0 {
                        m.swap(t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 {
                    let q = m[t][j] / m[t][t];
                    for row in m.iter_mut().take(rows).skip(t) {
                        row[j] -= q * row[t];
                    }
                    if m[t][j] != 0 {
                        for row in m.iter_mut() {
                            row.swap(t, j);
                        }
                        clean = false;
                    }
                }
            }
            // a row operation may have reintroduced column entries
            if clean {
                for i in t + 1..rows {
                    if m[i][t] != 0 {
                        clean = false;
                        break;
                    }
                }
            }
        }
        t += 1;
    }
    let mut diag: Vec<i128> = (0..n).map(|i| m[i][i].abs()).collect();
    // enforce the divisibility chain d1 | d2 | ...
    loop {
        let mut changed = false;
        for i in 0..diag.len() {
            for j in i + 1..diag.len() {
                if diag[i] != 0 && diag[j] % diag[i] != 0 {
                    let g = gcd(diag[i], diag[j]);
                    let l = diag[i] / g * diag[j];
                    diag[i] = g;
                    diag[j] = l;
                    changed = true;
                } else if diag[i] == 0 && diag[j] != 0 {
                    diag.swap(i, j);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    diag
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Parses the `gen`/`rel` format. Tokens in a relator are generator
/// names, uppercased names for inverses, or parenthesised powers
/// `(w)^k` with integer `k` (negative exponents invert the group word).
pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    let mut gens: Vec<String> = Vec::new();
    let mut relators: Vec<Word> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = tokens_with_cols(content);
        let Some((_, word)) = toks.next() else {
            continue;
        };
        match word {
            "gen" => {
                for (col, name) in toks {
                    if gens.iter().any(|g| g == name) {
                        return Err(PresentationError::DuplicateGenerator {
                            line,
                            name: name.into(),
                        });
                    }
                    if name.contains(['(', ')', '^']) {
                        return Err(syntax(line, col, "generator names may not contain ( ) ^"));
                    }
                    gens.push(name.to_string());
                }
            }
            "rel" => {
                let rest_start = content.find("rel").unwrap() + 3;
                let rest = &content[rest_start..];
                let word = parse_word(rest, line, rest_start + 1, &gens)?;
                relators.push(word);
            }
            other => {
                return Err(syntax(line, 1, &format!("unknown directive `{other}`")));
            }
        }
    }
    Ok(Presentation::new(gens, relators))
}

fn syntax(line: usize, col: usize, msg: &str) -> PresentationError {
    PresentationError::Syntax {
        line,
        col,
        msg: msg.to_string(),
    }
}

fn parse_word(
    s: &str,
    line: usize,
    col0: usize,
    gens: &[String],
) -> Result<Word, PresentationError> {
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0;
    let letters = parse_seq(&chars, &mut pos, line, col0, gens, false)?;
    Ok(Word::from_letters(letters))
}

/// Recursive-descent item sequence; `inside` marks a parenthesised group.
fn parse_seq(
    chars: &[char],
    pos: &mut usize,
    line: usize,
    col0: usize,
    gens: &[String],
    inside: bool,
) -> Result<Vec<Letter>, PresentationError> {
    let mut out = Vec::new();
    loop {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
        if *pos >= chars.len() {
            if inside {
                return Err(syntax(line, col0 + *pos, "unclosed parenthesis"));
            }
            return Ok(out);
        }
        match chars[*pos] {
            ')' => {
                if !inside {
                    return Err(syntax(line, col0 + *pos, "unmatched `)`"));
                }
                return Ok(out);
            }
            '(' => {
                *pos += 1;
                let group = parse_seq(chars, pos, line, col0, gens, true)?;
                // at `)`
                *pos += 1;
                if *pos >= chars.len() || chars[*pos] != '^' {
                    return Err(syntax(line, col0 + *pos, "group must be followed by ^<int>"));
                }
                *pos += 1;
                let start = *pos;
                if *pos < chars.len() && chars[*pos] == '-' {
                    *pos += 1;
                }
                while *pos < chars.len() && chars[*pos].is_ascii_digit() {
                    *pos += 1;
                }
                let exp: i64 = chars[start..*pos]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| syntax(line, col0 + start, "bad exponent"))?;
                let (base, reps): (Vec<Letter>, u64) = if exp >= 0 {
                    (group, exp as u64)
                } else {
                    (
                        group.iter().rev().map(|l| l.inv()).collect(),
                        exp.unsigned_abs(),
                    )
                };
                for _ in 0..reps {
                    out.extend(base.iter().copied());
                }
            }
            _ => {
                let start = *pos;
                while *pos < chars.len()
                    && !chars[*pos].is_whitespace()
                    && !['(', ')', '^'].contains(&chars[*pos])
                {
                    *pos += 1;
                }
                let tok: String = chars[start..*pos].iter().collect();
                let letter = resolve_letter(&tok, line, col0 + start, gens)?;
                out.push(letter);
            }
        }
    }
}

fn resolve_letter(
    tok: &str,
    line: usize,
    col: usize,
    gens: &[String],
) -> Result<Letter, PresentationError> {
    if let Some(i) = gens.iter().position(|g| g == tok) {
        return Ok(Letter {
            gen: i,
            inverse: false,
        });
    }
    let lower = tok.to_ascii_lowercase();
    if lower != tok {
        if let Some(i) = gens.iter().position(|g| *g == lower) {
            return Ok(Letter {
                gen: i,
                inverse: true,
            });
        }
    }
    let _ = col;
    Err(PresentationError::UnknownGenerator {
        line,
        name: tok.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma1() -> LabelledGraph {
        LabelledGraph::from_parts(&[], &[("a", "b", 3), ("b", "c", 4), ("a", "c", 5)]).unwrap()
    }

    fn word_str(p: &Presentation, i: usize) -> String {
        p.word_string(&p.relators()[i])
    }

    #[test]
    fn prod_word_shapes() {
        let w = prod_word(0, 1, 3).unwrap();
        assert_eq!(
            w.letters()
                .iter()
                .map(|l| (l.gen, l.inverse))
                .collect::<Vec<_>>(),
            vec![(0, false), (1, false), (0, false)]
        );
        assert_eq!(prod_word(0, 1, 1).unwrap().len(), 1);
        assert_eq!(prod_word(0, 1, 0), Err(PresentationError::ProdLengthZero));
    }

    #[test]
    fn artin_relators() {
        let p = artin_presentation(&gamma1());
        assert_eq!(p.generators(), &["a", "b", "c"]);
        assert_eq!(word_str(&p, 0), "a b a B A B");
        assert_eq!(word_str(&p, 1), "b c b c B C B C");
        assert_eq!(word_str(&p, 2), "a c a c a C A C A C");
    }

    #[test]
    fn commuting_edge_relator() {
        let p = artin_presentation(
            &LabelledGraph::from_parts(&[], &[("a", "b", 2)]).unwrap(),
        );
        assert_eq!(word_str(&p, 0), "a b A B");
    }

    #[test]
    fn free_reduction_at_construction() {
        let w = Word::from_letters([
            Letter { gen: 0, inverse: false },
            Letter { gen: 1, inverse: false },
            Letter { gen: 1, inverse: true },
            Letter { gen: 0, inverse: true },
        ]);
        assert!(w.is_empty());
    }

    #[test]
    fn shephard_adds_vertex_powers() {
        let p = shephard_presentation(&gamma1(), 2).unwrap();
        assert_eq!(p.relators().len(), 3 + 3);
        assert_eq!(word_str(&p, 3), "a a");
        assert_eq!(word_str(&p, 5), "c c");
        assert_eq!(
            shephard_presentation(&gamma1(), 0),
            Err(PresentationError::PowerBelowOne)
        );
        // N = 1: the power relator is the bare generator
        let p1 = shephard_presentation(&gamma1(), 1).unwrap();
        assert_eq!(word_str(&p1, 3), "a");
    }

    #[test]
    fn hyperbolic_quotient_adds_both_powers() {
        let p = hyperbolic_quotient_presentation(&gamma1(), 2).unwrap();
        assert_eq!(p.relators().len(), 3 + 3 + 3);
        assert_eq!(word_str(&p, 6), "a b a b a b a b a b a b"); // (ab)^{3*2}
        assert_eq!(p.relators()[7].len(), 16); // (bc)^{4*2}
        assert_eq!(p.relators()[8].len(), 20); // (ac)^{5*2}
    }

    #[test]
    fn kernel_matches_quotient_on_full_base() {
        let g = gamma1();
        let spec = KernelSpec::full_base(&g, 2);
        let k = kernel_presentation(&g, &spec).unwrap();
        // single odd component, rep = a: adds a^2 then the three edge powers
        assert_eq!(k.relators().len(), 3 + 1 + 3);
        assert_eq!(k.word_string(&k.relators()[3]), "a a");
    }

    #[test]
    fn kernel_validation() {
        let g = gamma1();
        let a = g.vertex("a").unwrap();
        let b = g.vertex("b").unwrap();
        let dup = KernelSpec {
            classes: vec![
                (KernelClass::Component(a), 2),
                (KernelClass::Component(b), 2), // same odd component
            ],
        };
        assert!(matches!(
            kernel_presentation(&g, &dup),
            Err(PresentationError::DuplicateKernelClass(_))
        ));
        let zero = KernelSpec {
            classes: vec![(KernelClass::Component(a), 0)],
        };
        assert!(matches!(
            kernel_presentation(&g, &zero),
            Err(PresentationError::MultiplierBelowOne)
        ));
        let h = LabelledGraph::from_parts(&[], &[("a", "b", 4), ("b", "c", 3)]).unwrap();
        let ha = h.vertex("a").unwrap();
        let hc = h.vertex("c").unwrap();
        let not_edge = KernelSpec {
            classes: vec![(KernelClass::Dihedral(ha, hc), 2)],
        };
        assert!(matches!(
            kernel_presentation(&h, &not_edge),
            Err(PresentationError::Graph(GraphError::UnknownEdge { .. }))
        ));
    }

    #[test]
    fn deep_enough_divisibility() {
        let g = gamma1();
        let spec = KernelSpec::full_base(&g, 6);
        assert!(is_deep_enough(&spec, &DeepEnough::new(3).unwrap()));
        assert!(is_deep_enough(&spec, &DeepEnough::new(6).unwrap()));
        assert!(!is_deep_enough(&spec, &DeepEnough::new(4).unwrap()));
        assert!(DeepEnough::new(0).is_err());
    }

    #[test]
    fn abelianization_of_artin_gamma1() {
        let ab = abelianization(&artin_presentation(&gamma1()));
        assert_eq!(ab.invariant_factors, Vec::<u64>::new());
        assert_eq!(ab.free_rank, 1); // one odd component
    }

    #[test]
    fn abelianization_of_shephard_gamma1() {
        // Frozen golden value, cross-checked against the determinantal
        // divisor oracle below: Z^3 / <a-b, a-c, 2a, 2b, 2c> = Z/2.
        let p = shephard_presentation(&gamma1(), 2).unwrap();
        let ab = abelianization(&p);
        assert_eq!(ab.invariant_factors, vec![2]);
        assert_eq!(ab.free_rank, 0);
        assert_eq!(minors_oracle(&p), (vec![2], 0));
    }

    #[test]
    fn abelianization_of_hyperbolic_quotient() {
        let p = hyperbolic_quotient_presentation(&gamma1(), 2).unwrap();
        let ab = abelianization(&p);
        assert_eq!(ab.invariant_factors, vec![2]);
        assert_eq!(ab.free_rank, 0);
        assert_eq!(minors_oracle(&p), (vec![2], 0));
    }

    /// Independent oracle: invariant factors via determinantal divisors
    /// (gcd of all k x k minors), a different algorithm from the
    /// elimination-based Smith normal form above.
    fn minors_oracle(p: &Presentation) -> (Vec<u64>, usize) {
        let rows = p.relators().len();
        let cols = p.generators().len();
        let m: Vec<Vec<i128>> = (0..rows)
            .map(|i| (0..cols).map(|j| p.relators()[i].exponent_sum(j) as i128).collect())
            .collect();
        let n = rows.min(cols);
        let mut divisors = vec![1i128]; // d_0 = 1
        for k in 1..=n {
            let mut g = 0i128;
            for rsel in combinations(rows, k) {
                for csel in combinations(cols, k) {
                    let det = minor_det(&m, &rsel, &csel);
                    g = gcd(g, det);
                }
            }
            divisors.push(g);
            if g == 0 {
                break;
            }
        }
        let mut factors = Vec::new();
        let mut rank = 0;
        for k in 1..divisors.len() {
            if divisors[k] == 0 {
                break;
            }
            rank = k;
            let f = divisors[k] / divisors[k - 1];
            if f > 1 {
                factors.push(f as u64);
            }
        }
        (factors, cols - rank)
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }

    fn minor_det(m: &[Vec<i128>], rsel: &[usize], csel: &[usize]) -> i128 {
        let k = rsel.len();
        let mut a: Vec<Vec<i128>> = rsel
            .iter()
            .map(|&i| csel.iter().map(|&j| m[i][j]).collect())
            .collect();
        // fraction-free gaussian elimination (Bareiss)
        let mut sign = 1i128;
        let mut prev = 1i128;
        for t in 0..k {
            if a[t][t] == 0 {
                let Some(p) = (t + 1..k).find(|&i| a[i][t] != 0) else {
                    return 0;
                };
                a.swap(t, p);
                sign = -sign;
            }
            for i in t + 1..k {
                for j in t + 1..k {
                    a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) / prev;
                }
                a[i][t] = 0;
            }
            prev = a[t][t];
        }
        sign * a[k - 1][k - 1]
    }

    #[test]
    fn snf_matches_minors_oracle_on_assorted_graphs() {
        let graphs = vec![
            LabelledGraph::from_parts(&[], &[("a", "b", 2)]).unwrap(),
            LabelledGraph::from_parts(&[], &[("a", "b", 4), ("b", "c", 3)]).unwrap(),
            LabelledGraph::from_parts(
                &[],
                &[("a", "b", 3), ("a", "g", 4), ("b", "g", 4)],
            )
            .unwrap(),
            LabelledGraph::from_parts(
                &["a", "b", "c", "d"],
                &[("a", "b", 5), ("b", "c", 6), ("c", "d", 3), ("d", "a", 8)],
            )
            .unwrap(),
        ];
        for g in &graphs {
            for p in [
                artin_presentation(g),
                shephard_presentation(g, 3).unwrap(),
                hyperbolic_quotient_presentation(g, 2).unwrap(),
                kernel_presentation(g, &KernelSpec::full_base(g, 4)).unwrap(),
            ] {
                let ab = abelianization(&p);
                let (factors, free) = minors_oracle(&p);
                assert_eq!(ab.invariant_factors, factors, "factors for {}", p.serialize());
                assert_eq!(ab.free_rank, free, "rank for {}", p.serialize());
            }
        }
    }

    #[test]
    fn artin_free_rank_counts_odd_components() {
        let g = LabelledGraph::from_parts(&[], &[("a", "b", 4), ("b", "c", 3)]).unwrap();
        let ab = abelianization(&artin_presentation(&g));
        assert_eq!(ab.free_rank, 2);
        assert!(ab.invariant_factors.is_empty());
    }

    #[test]
    fn parse_and_round_trip() {
        let p = hyperbolic_quotient_presentation(&gamma1(), 2).unwrap();
        let text = p.serialize();
        let q = parse_presentation(&text).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn parse_powers_and_inverses() {
        let p = parse_presentation("gen a b\nrel (a b)^3\nrel a B\nrel (a)^-2\n").unwrap();
        assert_eq!(p.word_string(&p.relators()[0]), "a b a b a b");
        assert_eq!(p.word_string(&p.relators()[1]), "a B");
        assert_eq!(p.word_string(&p.relators()[2]), "A A");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_presentation("gen a\nrel b\n"),
            Err(PresentationError::UnknownGenerator { line: 2, .. })
        ));
        assert!(matches!(
            parse_presentation("gen a a\n"),
            Err(PresentationError::DuplicateGenerator { .. })
        ));
        assert!(matches!(
            parse_presentation("gen a\nrel (a\n"),
            Err(PresentationError::Syntax { .. })
        ));
        assert!(matches!(
            parse_presentation("gen a\nrel (a)^\n"),
            Err(PresentationError::Syntax { .. })
        ));
    }

    #[test]
    fn ambiguous_inverse_uses_explicit_power() {
        // `A` is itself a generator, so the inverse of `a` cannot be
        // written as a capital.
        let p = Presentation::new(
            vec!["a".into(), "A".into()],
            vec![Word::from_letters([
                Letter { gen: 0, inverse: true },
                Letter { gen: 1, inverse: false },
            ])],
        );
        let s = p.serialize();
        assert!(s.contains("(a)^-1 A"), "got {s}");
        let q = parse_presentation(&s).unwrap();
        assert_eq!(p, q);
    }
}
