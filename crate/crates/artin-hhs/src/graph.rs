//! Labelled defining graphs.
//!
//! A graph here is a finite simplicial graph whose edges carry integer
//! labels `m >= 2`; an absent edge stands for the label infinity. The
//! text format is line-based:
//!
//! ```text
//! # comment
//! vertex a
//! vertex b
//! edge a b 3
//! ```
//!
//! Vertex declaration order is significant: it fixes generator order in
//! presentations, canonical class representatives, and serialisation.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Index of a vertex in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub(crate) usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: edge {a} {b} declared twice")]
    DuplicateEdge { line: usize, a: String, b: String },
    #[error("line {line}: label {label} is below 2")]
    LabelTooSmall { line: usize, label: i64 },
    #[error("line {line}: endpoint {name} is not a declared vertex")]
    UndeclaredEndpoint { line: usize, name: String },
    #[error("line {line}: vertex {name} declared twice")]
    DuplicateVertex { line: usize, name: String },
    #[error("line {line}: edge endpoints coincide ({name})")]
    SelfLoop { line: usize, name: String },
    #[error("vertex {name} not in graph")]
    UnknownVertex { name: String },
    #[error("no edge between {a} and {b}")]
    UnknownEdge { a: String, b: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelledGraph {
    names: Vec<String>,
    index_of: BTreeMap<String, usize>,
    adj: Vec<BTreeMap<usize, u32>>,
    edge_list: Vec<(usize, usize, u32)>, // normalised a < b, declaration order
}

impl LabelledGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder for tests and examples: vertices are declared in first
    /// appearance order unless listed up front in `vertices`.
    pub fn from_parts(
        vertices: &[&str],
        edges: &[(&str, &str, u32)],
    ) -> Result<Self, GraphError> {
        let mut g = LabelledGraph::new();
        for v in vertices {
            g.add_vertex(v)?;
        }
        for &(a, b, m) in edges {
            let a = match g.vertex(a) {
                Some(v) => v,
                None => g.add_vertex(a)?,
            };
            let b = match g.vertex(b) {
                Some(v) => v,
                None => g.add_vertex(b)?,
            };
            g.add_edge(a, b, m)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<VertexId, GraphError> {
        if name.is_empty() {
            return Err(GraphError::Syntax {
                line: 0,
                col: 0,
                msg: "empty vertex name".into(),
            });
        }
        if self.index_of.contains_key(name) {
            return Err(GraphError::DuplicateVertex {
                line: 0,
                name: name.into(),
            });
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index_of.insert(name.to_string(), id);
        self.adj.push(BTreeMap::new());
        Ok(VertexId(id))
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId, label: u32) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop {
                line: 0,
                name: self.names[a.0].clone(),
            });
        }
        if label < 2 {
            return Err(GraphError::LabelTooSmall {
                line: 0,
                label: label as i64,
            });
        }
        if self.adj[a.0].contains_key(&b.0) {
            return Err(GraphError::DuplicateEdge {
                line: 0,
                a: self.names[a.0].clone(),
                b: self.names[b.0].clone(),
            });
        }
        self.adj[a.0].insert(b.0, label);
        self.adj[b.0].insert(a.0, label);
        let (lo, hi) = if a.0 < b.0 { (a.0, b.0) } else { (b.0, a.0) };
        self.edge_list.push((lo, hi, label));
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_list.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.names.len()).map(VertexId)
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.index_of.get(name).copied().map(VertexId)
    }

    pub fn require_vertex(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertex(name).ok_or_else(|| GraphError::UnknownVertex {
            name: name.to_string(),
        })
    }

    pub fn label(&self, a: VertexId, b: VertexId) -> Option<u32> {
        self.adj[a.0].get(&b.0).copied()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adj[a.0].contains_key(&b.0)
    }

    /// Edges in declaration order with endpoints normalised `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, u32)> + '_ {
        self.edge_list
            .iter()
            .map(|&(a, b, m)| (VertexId(a), VertexId(b), m))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v.0].len()
    }

    /// Vertices adjacent to `v`, ascending by declaration index.
    pub fn link(&self, v: VertexId) -> Vec<VertexId> {
        self.adj[v.0].keys().map(|&u| VertexId(u)).collect()
    }

    /// `link(v)` together with `v` itself, ascending.
    pub fn star(&self, v: VertexId) -> Vec<VertexId> {
        let mut s = self.link(v);
        let pos = s.partition_point(|&u| u < v);
        s.insert(pos, v);
        s
    }

    /// Connected components as sorted vertex lists, ordered by least member.
    pub fn connected_components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.names.len()];
        let mut comps = Vec::new();
        for s in 0..self.names.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &v in self.adj[u].keys() {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp.into_iter().map(VertexId).collect());
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertex_count();
        self.edge_count() == n * n.saturating_sub(1) / 2
    }

    /// Induced subgraph on `verts`; vertex declaration order is inherited.
    pub fn induced(&self, verts: &[VertexId]) -> LabelledGraph {
        let mut sorted: Vec<usize> = verts.iter().map(|v| v.0).collect();
        sorted.sort_unstable();
        sorted.dedup();
        let mut g = LabelledGraph::new();
        for &v in &sorted {
            g.add_vertex(&self.names[v]).unwrap();
        }
        for &(a, b, m) in &self.edge_list {
            if let (Ok(i), Ok(j)) = (sorted.binary_search(&a), sorted.binary_search(&b)) {
                g.add_edge(VertexId(i), VertexId(j), m).unwrap();
            }
        }
        g
    }

    /// Same vertex set, odd-labelled edges only.
    pub fn odd_subgraph(&self) -> LabelledGraph {
        let mut g = LabelledGraph::new();
        for name in &self.names {
            g.add_vertex(name).unwrap();
        }
        for &(a, b, m) in &self.edge_list {
            if m % 2 == 1 {
                g.add_edge(VertexId(a), VertexId(b), m).unwrap();
            }
        }
        g
    }

    /// 3-cliques `[a, b, c]` with `a < b < c`, in lexicographic order.
    pub fn triangles(&self) -> Vec<[VertexId; 3]> {
        let mut out = Vec::new();
        for &(a, b, _) in &self.edge_list {
            let (a, b) = (a.min(b), a.max(b));
            for &c in self.adj[a].keys() {
                if c > b && self.adj[b].contains_key(&c) {
                    out.push([VertexId(a), VertexId(b), VertexId(c)]);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Induced 4-cycles `[a, b, c, d]` (edges ab, bc, cd, da; non-edges
    /// ac, bd), canonicalised so that `a` is least and `b < d`.
    pub fn squares(&self) -> Vec<[VertexId; 4]> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        // The pair {a, c} runs over the diagonals.
        for a in 0..n {
            for c in a + 1..n {
                if self.adj[a].contains_key(&c) {
                    continue;
                }
                let common: Vec<usize> = self.adj[a]
                    .keys()
                    .filter(|&&x| self.adj[c].contains_key(&x))
                    .copied()
                    .collect();
                for (i, &b) in common.iter().enumerate() {
                    for &d in &common[i + 1..] {
                        if self.adj[b].contains_key(&d) {
                            continue;
                        }
                        // Every induced 4-cycle has two diagonals; emit it
                        // only from the diagonal holding its least vertex,
                        // which (since b < d) means a < b.
                        if a < b {
                            out.push([VertexId(a), VertexId(b), VertexId(c), VertexId(d)]);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_triangle_and_square_free(&self) -> bool {
        self.triangles().is_empty() && self.squares().is_empty()
    }

    /// Canonical text form: vertices then edges, declaration order.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        for name in &self.names {
            s.push_str("vertex ");
            s.push_str(name);
            s.push('\n');
        }
        for &(a, b, m) in &self.edge_list {
            s.push_str(&format!("edge {} {} {}\n", self.names[a], self.names[b], m));
        }
        s
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph defining_graph {\n");
        for name in &self.names {
            s.push_str(&format!("  \"{}\";\n", name));
        }
        for &(a, b, m) in &self.edge_list {
            s.push_str(&format!(
                "  \"{}\" -- \"{}\" [label=\"{}\"];\n",
                self.names[a], self.names[b], m
            ));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.names.clone(),
            edges: self
                .edge_list
                .iter()
                .map(|&(a, b, m)| (self.names[a].clone(), self.names[b].clone(), m))
                .collect(),
        }
    }
}

impl fmt::Display for LabelledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// JSON shape: `{"vertices": [...], "edges": [["a","b",3], ...]}`.
#[derive(Serialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String, u32)>,
}

/// Parses the line-based graph format. `#` starts a comment anywhere in a
/// line; blank lines are skipped.
pub fn parse_graph(text: &str) -> Result<LabelledGraph, GraphError> {
    let mut g = LabelledGraph::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = tokens_with_cols(content);
        let Some((_, word)) = toks.next() else {
            continue;
        };
        match word {
            "vertex" => {
                let (_, name) = toks.next().ok_or_else(|| GraphError::Syntax {
                    line,
                    col: content.len() + 1,
                    msg: "vertex requires a name".into(),
                })?;
                g.add_vertex(name).map_err(|e| at_line(e, line))?;
                reject_trailing(toks.next(), line)?;
            }
            "edge" => {
                let (ca, a) = toks.next().ok_or_else(|| syntax(line, 1, "edge requires two endpoints and a label"))?;
                let (cb, b) = toks.next().ok_or_else(|| syntax(line, ca, "edge requires two endpoints and a label"))?;
                let (cl, lab) = toks.next().ok_or_else(|| syntax(line, cb, "edge requires a label"))?;
                let label: i64 = lab
                    .parse()
                    .map_err(|_| syntax(line, cl, &format!("label `{lab}` is not an integer")))?;
                if label < 2 {
                    return Err(GraphError::LabelTooSmall { line, label });
                }
                let va = g
                    .vertex(a)
                    .ok_or_else(|| GraphError::UndeclaredEndpoint { line, name: a.into() })?;
                let vb = g
                    .vertex(b)
                    .ok_or_else(|| GraphError::UndeclaredEndpoint { line, name: b.into() })?;
                g.add_edge(va, vb, label as u32).map_err(|e| at_line(e, line))?;
                reject_trailing(toks.next(), line)?;
            }
            other => {
                return Err(syntax(line, 1, &format!("unknown directive `{other}`")));
            }
        }
    }
    Ok(g)
}

pub(crate) fn tokens_with_cols(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.split_whitespace().map(move |tok| {
        let col = tok.as_ptr() as usize - s.as_ptr() as usize + 1;
        (col, tok)
    })
}

pub(crate) fn syntax(line: usize, col: usize, msg: &str) -> GraphError {
    GraphError::Syntax {
        line,
        col,
        msg: msg.to_string(),
    }
}

fn reject_trailing(tok: Option<(usize, &str)>, line: usize) -> Result<(), GraphError> {
    match tok {
        Some((col, t)) => Err(syntax(line, col, &format!("unexpected trailing token `{t}`"))),
        None => Ok(()),
    }
}

fn at_line(e: GraphError, line: usize) -> GraphError {
    match e {
        GraphError::DuplicateEdge { a, b, .. } => GraphError::DuplicateEdge { line, a, b },
        GraphError::DuplicateVertex { name, .. } => GraphError::DuplicateVertex { line, name },
        GraphError::LabelTooSmall { label, .. } => GraphError::LabelTooSmall { line, label },
        GraphError::SelfLoop { name, .. } => GraphError::SelfLoop { line, name },
        GraphError::Syntax { col, msg, .. } => GraphError::Syntax { line, col, msg },
        other => other,
    }
}
