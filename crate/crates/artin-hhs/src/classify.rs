//! Classification of Artin groups by their labelled defining graphs.
//!
//! Everything here is decidable graph combinatorics: type flags, the
//! decomposition into odd components, hanging-component shapes, the
//! product region graph, abelianization ranks, and a one-directional
//! Hopf verdict (`Hopfian` or `Unknown`, never a negative claim).

use crate::graph::{GraphError, GraphJson, LabelledGraph, VertexId};
use num_rational::Rational64;
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("hypothesis violated: {requirement}")]
    Hypothesis { requirement: String },
    #[error("{0}")]
    Graph(#[from] GraphError),
    #[error("removal target is not a component vertex")]
    RemovedNonComponent,
    #[error("removal target out of range")]
    RemovedOutOfRange,
}

fn hypothesis(requirement: impl Into<String>) -> ClassifyError {
    ClassifyError::Hypothesis {
        requirement: requirement.into(),
    }
}

/// Label-level type flags. Absent edges count as infinity, so a missing
/// edge never violates `large`/`extra_large`/`xxxl`/`even`, and only
/// actual triangles can violate `hyperbolic`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TypeFlags {
    /// all labels >= 3
    pub large: bool,
    /// every triangle has 1/m_ab + 1/m_bc + 1/m_ac < 1
    pub hyperbolic: bool,
    /// all labels even
    pub even: bool,
    /// all labels >= 4
    pub extra_large: bool,
    /// all labels >= 6
    pub xxxl: bool,
    /// complete defining graph
    pub free_of_infinity: bool,
    pub connected: bool,
}

pub fn type_flags(g: &LabelledGraph) -> TypeFlags {
    let mut large = true;
    let mut even = true;
    let mut extra_large = true;
    let mut xxxl = true;
    for (_, _, m) in g.edges() {
        large &= m >= 3;
        even &= m % 2 == 0;
        extra_large &= m >= 4;
        xxxl &= m >= 6;
    }
    let hyperbolic = g
        .triangles()
        .iter()
        .all(|&[a, b, c]| triangle_is_hyperbolic(g, a, b, c));
    TypeFlags {
        large,
        hyperbolic,
        even,
        extra_large,
        xxxl,
        free_of_infinity: g.is_complete(),
        connected: g.is_connected(),
    }
}

/// Exact rational test: 1/m_ab + 1/m_bc + 1/m_ac < 1.
fn triangle_is_hyperbolic(g: &LabelledGraph, a: VertexId, b: VertexId, c: VertexId) -> bool {
    let sum: Rational64 = [(a, b), (b, c), (a, c)]
        .iter()
        .map(|&(u, v)| Rational64::new(1, g.label(u, v).expect("triangle edge") as i64))
        .sum();
    sum < Rational64::new(1, 1)
}

/// Shape of an odd component inside the odd component graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HangingKind {
    /// valence != 1 in the odd component graph
    NotHanging,
    /// hanging with more than one vertex
    Broad,
    /// hanging singleton whose vertex has valence 1 in the defining graph
    Needle,
    /// hanging singleton whose vertex has valence >= 2 in the defining graph
    ForbiddenSingleton,
}

/// Partition of the vertices into odd components, the graph those
/// components span via even edges, and each component's hanging shape.
#[derive(Clone, Debug)]
pub struct OddDecomposition {
    components: Vec<Vec<VertexId>>, // sorted members, ordered by least member
    component_of: Vec<usize>,
    oc_edges: BTreeSet<(usize, usize)>,
    kinds: Vec<HangingKind>,
}

impl OddDecomposition {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<VertexId>] {
        &self.components
    }

    pub fn component_of(&self, v: VertexId) -> usize {
        self.component_of[v.index()]
    }

    pub fn kind(&self, component: usize) -> HangingKind {
        self.kinds[component]
    }

    pub fn kinds(&self) -> &[HangingKind] {
        &self.kinds
    }

    /// Edges of the odd component graph, as index pairs `(i, j)`, `i < j`.
    pub fn oc_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.oc_edges
    }

    pub fn oc_degree(&self, component: usize) -> usize {
        self.oc_edges
            .iter()
            .filter(|&&(i, j)| i == component || j == component)
            .count()
    }

    pub fn is_hanging(&self, component: usize) -> bool {
        self.kinds[component] != HangingKind::NotHanging
    }

    /// True when no hanging component is a forbidden singleton, i.e. the
    /// odd-component hypothesis of the Hopf criterion holds.
    pub fn hanging_ok(&self) -> bool {
        self.kinds
            .iter()
            .all(|&k| k != HangingKind::ForbiddenSingleton)
    }
}

/// Decomposes `g` into odd components (components of the odd-labelled
/// subgraph), builds the odd component graph (components joined by an
/// even edge are adjacent), and classifies each component. A component
/// is hanging exactly when its valence in the odd component graph is 1.
pub fn odd_decomposition(g: &LabelledGraph) -> OddDecomposition {
    let components = g.odd_subgraph().connected_components();
    let mut component_of = vec![0usize; g.vertex_count()];
    for (i, comp) in components.iter().enumerate() {
        for &v in comp {
            component_of[v.index()] = i;
        }
    }
    let mut oc_edges = BTreeSet::new();
    for (a, b, m) in g.edges() {
        if m % 2 == 0 {
            let (i, j) = (component_of[a.index()], component_of[b.index()]);
            if i != j {
                oc_edges.insert((i.min(j), i.max(j)));
            }
        }
    }
    let mut kinds = Vec::with_capacity(components.len());
    for (i, comp) in components.iter().enumerate() {
        let valence = oc_edges.iter().filter(|&&(x, y)| x == i || y == i).count();
        let kind = if valence != 1 {
            HangingKind::NotHanging
        } else if comp.len() > 1 {
            HangingKind::Broad
        } else if g.degree(comp[0]) == 1 {
            HangingKind::Needle
        } else {
            HangingKind::ForbiddenSingleton
        };
        kinds.push(kind);
    }
    OddDecomposition {
        components,
        component_of,
        oc_edges,
        kinds,
    }
}

/// Vertices of valence 1 whose unique edge is even-labelled.
pub fn even_leaf_tips(g: &LabelledGraph) -> Vec<VertexId> {
    g.vertices()
        .filter(|&v| {
            g.degree(v) == 1 && {
                let w = g.link(v)[0];
                g.label(v, w).unwrap() % 2 == 0
            }
        })
        .collect()
}

/// Vertex of the product region graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrNode {
    /// index into [`PrGraph::components`]
    Component(usize),
    /// index into [`PrGraph::dihedrals`]
    Dihedral(usize),
}

/// The product region graph of a connected large-type defining graph on
/// at least 3 vertices: a bipartite graph whose vertices are the odd
/// components not consisting solely of even-leaf tips, plus one vertex
/// per edge of the defining graph; a component is adjacent to an edge
/// exactly when the edge has an endpoint in the component.
#[derive(Clone, Debug)]
pub struct PrGraph {
    /// kept components: (index into the odd decomposition, sorted members)
    components: Vec<(usize, Vec<VertexId>)>,
    dihedrals: Vec<(VertexId, VertexId)>,
    edges: BTreeSet<(usize, usize)>, // (component position, dihedral position)
}

impl PrGraph {
    pub fn components(&self) -> &[(usize, Vec<VertexId>)] {
        &self.components
    }

    pub fn dihedrals(&self) -> &[(VertexId, VertexId)] {
        &self.dihedrals
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn adjacent(&self, component: usize, dihedral: usize) -> bool {
        self.edges.contains(&(component, dihedral))
    }

    /// Removes the given vertices (components only) and reports whether
    /// the remaining graph has no edges.
    pub fn discrete_after_removal(&self, removed: &[PrNode]) -> Result<bool, ClassifyError> {
        let mut gone = vec![false; self.components.len()];
        for node in removed {
            match *node {
                PrNode::Component(i) if i < self.components.len() => gone[i] = true,
                PrNode::Component(_) => return Err(ClassifyError::RemovedOutOfRange),
                PrNode::Dihedral(_) => return Err(ClassifyError::RemovedNonComponent),
            }
        }
        Ok(self.edges.iter().all(|&(c, _)| gone[c]))
    }

    pub fn to_dot(&self, g: &LabelledGraph) -> String {
        let mut s = String::from("graph product_regions {\n");
        for (pos, (_, members)) in self.components.iter().enumerate() {
            let label = members
                .iter()
                .map(|&v| g.name(v))
                .collect::<Vec<_>>()
                .join(",");
            s.push_str(&format!(
                "  c{pos} [shape=box, label=\"{{{label}}}\"];\n"
            ));
        }
        for (pos, &(a, b)) in self.dihedrals.iter().enumerate() {
            s.push_str(&format!(
                "  d{pos} [label=\"{}-{}\"];\n",
                g.name(a),
                g.name(b)
            ));
        }
        for &(c, d) in &self.edges {
            s.push_str(&format!("  c{c} -- d{d};\n"));
        }
        s.push_str("}\n");
        s
    }
}

pub fn product_region_graph(g: &LabelledGraph) -> Result<PrGraph, ClassifyError> {
    if !g.is_connected() {
        return Err(hypothesis("defining graph must be connected"));
    }
    if g.vertex_count() < 3 {
        return Err(hypothesis("defining graph must have at least 3 vertices"));
    }
    for (a, b, m) in g.edges() {
        if m < 3 {
            return Err(hypothesis(format!(
                "large type required, but edge {} {} has label {}",
                g.name(a),
                g.name(b),
                m
            )));
        }
    }
    let dec = odd_decomposition(g);
    let tips: BTreeSet<VertexId> = even_leaf_tips(g).into_iter().collect();
    let mut components = Vec::new();
    for (i, comp) in dec.components().iter().enumerate() {
        if comp.iter().all(|v| tips.contains(v)) {
            continue; // consists solely of even-leaf tips: pruned
        }
        components.push((i, comp.clone()));
    }
    let dihedrals: Vec<(VertexId, VertexId)> = g.edges().map(|(a, b, _)| (a, b)).collect();
    let mut edges = BTreeSet::new();
    for (cpos, (ci, _)) in components.iter().enumerate() {
        for (dpos, &(a, b)) in dihedrals.iter().enumerate() {
            if dec.component_of(a) == *ci || dec.component_of(b) == *ci {
                edges.insert((cpos, dpos));
            }
        }
    }
    Ok(PrGraph {
        components,
        dihedrals,
        edges,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankBound {
    Exact(u32),
    AtLeast(u32),
}

#[derive(Clone, Copy, Debug)]
pub enum StabilizerTarget {
    /// image of the stabiliser of a dihedral product region
    Dihedral(VertexId, VertexId),
    /// image of the centraliser of a standard generator
    Centralizer(VertexId),
}

/// Rank of the free abelianization: one generator per odd component.
pub fn abelianization_rank(g: &LabelledGraph) -> usize {
    odd_decomposition(g).component_count()
}

/// Rank of the image, in the abelianization, of the subgroup attached to
/// a product region: a dihedral on an edge inside one odd component has
/// rank 1, across two components rank 2; a generator's centraliser has
/// rank exactly 2 when its component hangs, and otherwise at least 3.
pub fn stabilizer_image_rank(
    g: &LabelledGraph,
    target: StabilizerTarget,
) -> Result<RankBound, ClassifyError> {
    match target {
        StabilizerTarget::Dihedral(a, b) => {
            if g.label(a, b).is_none() {
                return Err(ClassifyError::Graph(GraphError::UnknownEdge {
                    a: g.name(a).to_string(),
                    b: g.name(b).to_string(),
                }));
            }
            let dec = odd_decomposition(g);
            Ok(if dec.component_of(a) == dec.component_of(b) {
                RankBound::Exact(1)
            } else {
                RankBound::Exact(2)
            })
        }
        StabilizerTarget::Centralizer(v) => {
            if !g.is_connected() {
                return Err(hypothesis("defining graph must be connected"));
            }
            if g.vertex_count() < 3 {
                return Err(hypothesis("defining graph must have at least 3 vertices"));
            }
            let dec = odd_decomposition(g);
            Ok(if dec.is_hanging(dec.component_of(v)) {
                RankBound::Exact(2)
            } else {
                RankBound::AtLeast(3)
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Hopfian,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Small,
    FreeProductReduction,
    SingleOdd,
    TwoOddNeedle,
    TwoOddBroad,
    ThreePlusOdd,
    FailsHypotheses,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Obstruction {
    NonLargeLabel { a: String, b: String, label: u32 },
    NonHyperbolicTriangle { a: String, b: String, c: String },
    ForbiddenSingleton { vertex: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HopfVerdict {
    pub outcome: Outcome,
    pub branch: Branch,
    pub obstructions: Vec<Obstruction>,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Small => "small",
            Branch::FreeProductReduction => "free-product-reduction",
            Branch::SingleOdd => "single-odd",
            Branch::TwoOddNeedle => "two-odd-needle",
            Branch::TwoOddBroad => "two-odd-broad",
            Branch::ThreePlusOdd => "three-plus-odd",
            Branch::FailsHypotheses => "fails-hypotheses",
        }
    }
}

impl Obstruction {
    pub fn describe(&self) -> String {
        match self {
            Obstruction::NonLargeLabel { a, b, label } => {
                format!("label {label} < 3 on edge {{{a},{b}}}")
            }
            Obstruction::NonHyperbolicTriangle { a, b, c } => {
                format!("non-hyperbolic triangle {{{a},{b},{c}}}")
            }
            Obstruction::ForbiddenSingleton { vertex } => {
                format!("forbidden singleton hanging component {{{vertex}}}")
            }
        }
    }
}

impl HopfVerdict {
    /// One-line rendering: `HOPFIAN (<branch>)` or `UNKNOWN: <obstructions>`.
    pub fn summary(&self) -> String {
        match self.outcome {
            Outcome::Hopfian => format!("HOPFIAN ({})", self.branch.name()),
            Outcome::Unknown => format!(
                "UNKNOWN: {}",
                self.obstructions
                    .iter()
                    .map(Obstruction::describe)
                    .collect::<Vec<_>>()
                    .join("; ")
            ),
        }
    }

    fn hopfian(branch: Branch) -> Self {
        HopfVerdict {
            outcome: Outcome::Hopfian,
            branch,
            obstructions: Vec::new(),
        }
    }

    fn unknown(obstructions: Vec<Obstruction>) -> Self {
        HopfVerdict {
            outcome: Outcome::Unknown,
            branch: Branch::FailsHypotheses,
            obstructions,
        }
    }
}

/// Decision procedure for the Hopf criterion. The verdict is
/// one-directional: `Unknown` never asserts a group is non-Hopfian, it
/// only reports that the criterion's hypotheses fail, with the list of
/// obstructions.
///
/// Order of checks: type flags first (any small label or flat/spherical
/// triangle stops the analysis), then the free product reduction for
/// disconnected graphs, then the small cases (at most 2 vertices), then
/// the hanging-component condition with the branch named after the
/// odd-component count.
pub fn hopf_verdict(g: &LabelledGraph) -> HopfVerdict {
    let mut obstructions = Vec::new();
    for (a, b, m) in g.edges() {
        if m < 3 {
            obstructions.push(Obstruction::NonLargeLabel {
                a: g.name(a).to_string(),
                b: g.name(b).to_string(),
                label: m,
            });
        }
    }
    for [a, b, c] in g.triangles() {
        if !triangle_is_hyperbolic(g, a, b, c) {
            obstructions.push(Obstruction::NonHyperbolicTriangle {
                a: g.name(a).to_string(),
                b: g.name(b).to_string(),
                c: g.name(c).to_string(),
            });
        }
    }
    if !obstructions.is_empty() {
        return HopfVerdict::unknown(obstructions);
    }

    let components = g.connected_components();
    if components.len() > 1 {
        let mut merged = Vec::new();
        for comp in &components {
            let verdict = hopf_verdict(&g.induced(comp));
            merged.extend(verdict.obstructions);
        }
        return if merged.is_empty() {
            HopfVerdict::hopfian(Branch::FreeProductReduction)
        } else {
            HopfVerdict::unknown(merged)
        };
    }

    if g.vertex_count() <= 2 {
        return HopfVerdict::hopfian(Branch::Small);
    }

    let dec = odd_decomposition(g);
    let forbidden: Vec<Obstruction> = dec
        .components()
        .iter()
        .zip(dec.kinds())
        .filter(|(_, &k)| k == HangingKind::ForbiddenSingleton)
        .map(|(comp, _)| Obstruction::ForbiddenSingleton {
            vertex: g.name(comp[0]).to_string(),
        })
        .collect();
    if !forbidden.is_empty() {
        return HopfVerdict::unknown(forbidden);
    }
    let branch = match dec.component_count() {
        1 => Branch::SingleOdd,
        2 => {
            if dec.kinds().contains(&HangingKind::Needle) {
                Branch::TwoOddNeedle
            } else {
                Branch::TwoOddBroad
            }
        }
        _ => Branch::ThreePlusOdd,
    };
    HopfVerdict::hopfian(branch)
}

/// Informational membership flags for classes with known residual
/// properties. No verdict is derived from these.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KnownClassesReport {
    pub triangle_free: bool,
    pub even: bool,
    pub xxxl: bool,
    pub free_of_infinity: bool,
    pub single_odd_component: bool,
}

pub fn known_classes_report(g: &LabelledGraph) -> KnownClassesReport {
    let flags = type_flags(g);
    KnownClassesReport {
        triangle_free: g.triangles().is_empty(),
        even: flags.even,
        xxxl: flags.xxxl,
        free_of_infinity: flags.free_of_infinity,
        single_odd_component: odd_decomposition(g).component_count() == 1,
    }
}

/// Aggregate report used by the `classify` subcommand.
#[derive(Serialize)]
pub struct ClassifyReport {
    pub graph: GraphJson,
    pub flags: TypeFlags,
    pub odd_components: Vec<OddComponentReport>,
    pub even_leaf_tips: Vec<String>,
    pub abelianization_rank: usize,
    pub verdict: HopfVerdict,
    pub known_classes: KnownClassesReport,
}

#[derive(Serialize)]
pub struct OddComponentReport {
    pub members: Vec<String>,
    pub kind: HangingKind,
}

pub fn classify_report(g: &LabelledGraph) -> ClassifyReport {
    let dec = odd_decomposition(g);
    ClassifyReport {
        graph: g.to_json(),
        flags: type_flags(g),
        odd_components: dec
            .components()
            .iter()
            .zip(dec.kinds())
            .map(|(comp, &kind)| OddComponentReport {
                members: comp.iter().map(|&v| g.name(v).to_string()).collect(),
                kind,
            })
            .collect(),
        even_leaf_tips: even_leaf_tips(g)
            .into_iter()
            .map(|v| g.name(v).to_string())
            .collect(),
        abelianization_rank: abelianization_rank(g),
        verdict: hopf_verdict(g),
        known_classes: known_classes_report(g),
    }
}

impl ClassifyReport {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let f = &self.flags;
        s.push_str(&format!(
            "flags: large={} hyperbolic={} even={} extra-large={} xxxl={} free-of-infinity={} connected={}\n",
            f.large, f.hyperbolic, f.even, f.extra_large, f.xxxl, f.free_of_infinity, f.connected
        ));
        s.push_str(&format!("odd components ({}):\n", self.odd_components.len()));
        for c in &self.odd_components {
            s.push_str(&format!(
                "  {{{}}} {}\n",
                c.members.join(","),
                match c.kind {
                    HangingKind::NotHanging => "not hanging",
                    HangingKind::Broad => "hanging: broad",
                    HangingKind::Needle => "hanging: needle",
                    HangingKind::ForbiddenSingleton => "hanging: forbidden singleton",
                }
            ));
        }
        if self.even_leaf_tips.is_empty() {
            s.push_str("even-leaf tips: none\n");
        } else {
            s.push_str(&format!("even-leaf tips: {}\n", self.even_leaf_tips.join(" ")));
        }
        s.push_str(&format!("abelianization rank: {}\n", self.abelianization_rank));
        s.push_str(&format!("verdict: {}\n", self.verdict.summary()));
        let k = &self.known_classes;
        s.push_str(&format!(
            "known classes: triangle-free={} even={} xxxl={} free-of-infinity={} single-odd-component={}\n",
            k.triangle_free, k.even, k.xxxl, k.free_of_infinity, k.single_odd_component
        ));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn gamma1() -> LabelledGraph {
        LabelledGraph::from_parts(&[], &[("a", "b", 3), ("b", "c", 4), ("a", "c", 5)]).unwrap()
    }

    fn gamma2() -> LabelledGraph {
        LabelledGraph::from_parts(&[], &[("a", "b", 4), ("b", "c", 3)]).unwrap()
    }

    fn gamma4() -> LabelledGraph {
        LabelledGraph::from_parts(&[], &[("a", "b", 3), ("a", "g", 4), ("b", "g", 4)]).unwrap()
    }

    /// Seven vertices, three hanging components of the three shapes:
    /// {d,e} broad, {f} needle, {g} forbidden singleton.
    fn hanging_zoo() -> LabelledGraph {
        LabelledGraph::from_parts(
            &["a", "b", "c", "d", "e", "f", "g"],
            &[
                ("a", "b", 3),
                ("b", "c", 5),
                ("a", "c", 5),
                ("d", "e", 3),
                ("d", "a", 4),
                ("f", "b", 4),
                ("g", "a", 4),
                ("g", "b", 4),
            ],
        )
        .unwrap()
    }

    #[test]
    fn flags_on_triangles() {
        let g333 =
            LabelledGraph::from_parts(&[], &[("a", "b", 3), ("b", "c", 3), ("a", "c", 3)]).unwrap();
        let f = type_flags(&g333);
        assert!(f.large);
        assert!(!f.hyperbolic); // 1/3 + 1/3 + 1/3 = 1
        let f1 = type_flags(&gamma1());
        assert!(f1.large && f1.hyperbolic && f1.free_of_infinity);
        assert!(!f1.even && !f1.extra_large && !f1.xxxl);
        let g334 =
            LabelledGraph::from_parts(&[], &[("a", "b", 3), ("b", "c", 3), ("a", "c", 4)]).unwrap();
        assert!(type_flags(&g334).hyperbolic); // 11/12 < 1
    }

    #[test]
    fn flags_vacuous_cases() {
        let path = gamma2();
        let f = type_flags(&path);
        assert!(f.hyperbolic, "no triangles means hyperbolic vacuously");
        assert!(!f.free_of_infinity);
        let single = LabelledGraph::from_parts(&["a"], &[]).unwrap();
        let f = type_flags(&single);
        assert!(f.large && f.hyperbolic && f.even && f.xxxl && f.free_of_infinity && f.connected);
    }

    #[test]
    fn xxxl_implies_extra_large_implies_large() {
        for edges in [
            vec![("a", "b", 6u32), ("b", "c", 8)],
            vec![("a", "b", 4), ("b", "c", 5)],
            vec![("a", "b", 2)],
        ] {
            let g = LabelledGraph::from_parts(&[], &edges.iter().map(|&(a, b, m)| (a, b, m)).collect::<Vec<_>>()).unwrap();
            let f = type_flags(&g);
            assert!(!f.xxxl || f.extra_large);
            assert!(!f.extra_large || f.large);
        }
    }

    #[test]
    fn gamma1_single_odd_component() {
        let dec = odd_decomposition(&gamma1());
        assert_eq!(dec.component_count(), 1);
        assert_eq!(dec.kind(0), HangingKind::NotHanging);
        assert!(dec.hanging_ok());
        assert_eq!(abelianization_rank(&gamma1()), 1);
    }

    #[test]
    fn gamma2_needle_and_broad() {
        let g = gamma2();
        let dec = odd_decomposition(&g);
        assert_eq!(dec.component_count(), 2);
        // components ordered by least member: {a}, {b,c}
        assert_eq!(dec.components()[0], vec![g.vertex("a").unwrap()]);
        assert_eq!(dec.kind(0), HangingKind::Needle);
        assert_eq!(dec.kind(1), HangingKind::Broad);
        assert_eq!(even_leaf_tips(&g), vec![g.vertex("a").unwrap()]);
        assert_eq!(abelianization_rank(&g), 2);
    }

    #[test]
    fn gamma4_forbidden_singleton() {
        let g = gamma4();
        let dec = odd_decomposition(&g);
        assert_eq!(dec.component_count(), 2);
        // Both even edges join {a,b} to {g}, so the odd component graph is
        // a single edge: {a,b} is hanging broad, {g} a forbidden singleton.
        let comp_ab = dec.component_of(g.vertex("a").unwrap());
        let comp_g = dec.component_of(g.vertex("g").unwrap());
        assert_ne!(comp_ab, comp_g);
        assert_eq!(dec.kind(comp_ab), HangingKind::Broad);
        assert_eq!(dec.kind(comp_g), HangingKind::ForbiddenSingleton);
        assert!(!dec.hanging_ok());
        assert!(even_leaf_tips(&g).is_empty());
    }

    #[test]
    fn oc_graph_of_zoo_is_star() {
        let g = hanging_zoo();
        let dec = odd_decomposition(&g);
        assert_eq!(dec.component_count(), 4);
        assert_eq!(dec.oc_edges().len(), 3);
        let kinds: Vec<HangingKind> = dec.kinds().to_vec();
        assert_eq!(
            kinds.iter().filter(|&&k| k == HangingKind::Broad).count(),
            1
        );
        assert_eq!(
            kinds.iter().filter(|&&k| k == HangingKind::Needle).count(),
            1
        );
        assert_eq!(
            kinds
                .iter()
                .filter(|&&k| k == HangingKind::ForbiddenSingleton)
                .count(),
            1
        );
    }

    #[test]
    fn pr_graph_of_gamma2() {
        let g = gamma2();
        let pr = product_region_graph(&g).unwrap();
        // {a} is pruned (even-leaf tip); {b,c} stays; two dihedral vertices.
        assert_eq!(pr.components().len(), 1);
        assert_eq!(pr.dihedrals().len(), 2);
        assert_eq!(pr.edges().len(), 2);
        assert!(pr.adjacent(0, 0) && pr.adjacent(0, 1));
        // Removing the unique component vertex makes it discrete.
        assert!(pr.discrete_after_removal(&[PrNode::Component(0)]).unwrap());
        assert!(!pr.discrete_after_removal(&[]).unwrap());
    }

    #[test]
    fn pr_graph_of_gamma4() {
        let g = gamma4();
        let pr = product_region_graph(&g).unwrap();
        assert_eq!(pr.components().len(), 2);
        assert_eq!(pr.dihedrals().len(), 3);
        // {a,b} meets all three edges; {g} meets ag and bg.
        assert_eq!(pr.edges().len(), 5);
        assert!(pr.discrete_after_removal(&[PrNode::Component(0), PrNode::Component(1)]).unwrap());
        assert!(!pr
            .discrete_after_removal(&[PrNode::Component(1)])
            .unwrap());
        assert!(matches!(
            pr.discrete_after_removal(&[PrNode::Dihedral(0)]),
            Err(ClassifyError::RemovedNonComponent)
        ));
    }

    #[test]
    fn pr_graph_preconditions() {
        let two = LabelledGraph::from_parts(&[], &[("a", "b", 3)]).unwrap();
        assert!(matches!(
            product_region_graph(&two),
            Err(ClassifyError::Hypothesis { .. })
        ));
        let small_label =
            LabelledGraph::from_parts(&[], &[("a", "b", 2), ("b", "c", 3), ("a", "c", 3)]).unwrap();
        assert!(matches!(
            product_region_graph(&small_label),
            Err(ClassifyError::Hypothesis { .. })
        ));
        let disconnected = parse_graph("vertex a\nvertex b\nvertex c\nvertex d\nedge a b 3\nedge c d 3\n").unwrap();
        assert!(matches!(
            product_region_graph(&disconnected),
            Err(ClassifyError::Hypothesis { .. })
        ));
    }

    #[test]
    fn pr_graph_is_bipartite_by_construction() {
        let pr = product_region_graph(&hanging_zoo()).unwrap();
        for &(c, d) in pr.edges() {
            assert!(c < pr.components().len());
            assert!(d < pr.dihedrals().len());
        }
    }

    #[test]
    fn single_odd_removal_yields_discrete() {
        // For single-odd-component graphs, removing the unique component
        // vertex always yields a discrete graph.
        for g in [
            gamma1(),
            LabelledGraph::from_parts(&[], &[("a", "b", 3), ("b", "c", 3)]).unwrap(),
            LabelledGraph::from_parts(
                &[],
                &[("a", "b", 5), ("b", "c", 3), ("c", "d", 7), ("d", "a", 9)],
            )
            .unwrap(),
        ] {
            let pr = product_region_graph(&g).unwrap();
            assert_eq!(pr.components().len(), 1);
            assert!(pr.discrete_after_removal(&[PrNode::Component(0)]).unwrap());
        }
    }

    #[test]
    fn stabilizer_ranks() {
        let g = gamma4();
        let a = g.vertex("a").unwrap();
        let b = g.vertex("b").unwrap();
        let gg = g.vertex("g").unwrap();
        assert_eq!(
            stabilizer_image_rank(&g, StabilizerTarget::Dihedral(a, b)).unwrap(),
            RankBound::Exact(1)
        );
        assert_eq!(
            stabilizer_image_rank(&g, StabilizerTarget::Dihedral(a, gg)).unwrap(),
            RankBound::Exact(2)
        );
        assert_eq!(
            stabilizer_image_rank(&g, StabilizerTarget::Centralizer(gg)).unwrap(),
            RankBound::Exact(2)
        );
        let g1 = gamma1();
        let a1 = g1.vertex("a").unwrap();
        assert_eq!(
            stabilizer_image_rank(&g1, StabilizerTarget::Centralizer(a1)).unwrap(),
            RankBound::AtLeast(3)
        );
        // unknown edge
        let c = g1.vertex("c").unwrap();
        let h = gamma2();
        let ha = h.vertex("a").unwrap();
        let hc = h.vertex("c").unwrap();
        assert!(stabilizer_image_rank(&h, StabilizerTarget::Dihedral(ha, hc)).is_err());
        let _ = c;
    }

    #[test]
    fn verdicts_on_named_graphs() {
        let v1 = hopf_verdict(&gamma1());
        assert_eq!(v1.outcome, Outcome::Hopfian);
        assert_eq!(v1.branch, Branch::SingleOdd);

        let v2 = hopf_verdict(&gamma2());
        assert_eq!(v2.outcome, Outcome::Hopfian);
        assert_eq!(v2.branch, Branch::TwoOddNeedle);

        let v4 = hopf_verdict(&gamma4());
        assert_eq!(v4.outcome, Outcome::Unknown);
        assert_eq!(v4.branch, Branch::FailsHypotheses);
        assert_eq!(
            v4.obstructions,
            vec![Obstruction::ForbiddenSingleton {
                vertex: "g".into()
            }]
        );

        let zoo = hopf_verdict(&hanging_zoo());
        assert_eq!(zoo.outcome, Outcome::Unknown);
        assert!(zoo
            .obstructions
            .iter()
            .any(|o| matches!(o, Obstruction::ForbiddenSingleton { vertex } if vertex == "g")));
    }

    #[test]
    fn zoo_without_g_is_hopfian_three_plus() {
        let g = hanging_zoo();
        let keep: Vec<_> = g.vertices().filter(|&v| g.name(v) != "g").collect();
        let v = hopf_verdict(&g.induced(&keep));
        assert_eq!(v.outcome, Outcome::Hopfian);
        assert_eq!(v.branch, Branch::ThreePlusOdd);
    }

    #[test]
    fn two_odd_broad_branch() {
        // Two broad components joined by an even edge.
        let g = LabelledGraph::from_parts(
            &[],
            &[("a", "b", 3), ("b", "c", 4), ("c", "d", 3)],
        )
        .unwrap();
        let v = hopf_verdict(&g);
        assert_eq!(v.outcome, Outcome::Hopfian);
        assert_eq!(v.branch, Branch::TwoOddBroad);
    }

    #[test]
    fn small_and_free_product_branches() {
        let single = LabelledGraph::from_parts(&["a"], &[]).unwrap();
        assert_eq!(hopf_verdict(&single).branch, Branch::Small);
        let edge = LabelledGraph::from_parts(&[], &[("a", "b", 7)]).unwrap();
        assert_eq!(hopf_verdict(&edge).branch, Branch::Small);

        let two_triangles = LabelledGraph::from_parts(
            &[],
            &[
                ("a", "b", 3),
                ("b", "c", 4),
                ("a", "c", 5),
                ("x", "y", 3),
                ("y", "z", 4),
                ("x", "z", 5),
            ],
        )
        .unwrap();
        let v = hopf_verdict(&two_triangles);
        assert_eq!(v.outcome, Outcome::Hopfian);
        assert_eq!(v.branch, Branch::FreeProductReduction);
    }

    #[test]
    fn free_product_with_failing_component() {
        let g = LabelledGraph::from_parts(
            &[],
            &[
                ("a", "b", 3),
                ("a", "g", 4),
                ("b", "g", 4), // forbidden singleton in this component
                ("x", "y", 3),
            ],
        )
        .unwrap();
        let v = hopf_verdict(&g);
        assert_eq!(v.outcome, Outcome::Unknown);
        assert_eq!(v.branch, Branch::FailsHypotheses);
        assert_eq!(v.obstructions.len(), 1);
    }

    #[test]
    fn type_check_precedes_everything() {
        let g = LabelledGraph::from_parts(&[], &[("a", "b", 2)]).unwrap();
        let v = hopf_verdict(&g);
        assert_eq!(v.outcome, Outcome::Unknown);
        assert_eq!(v.branch, Branch::FailsHypotheses);
        assert!(matches!(v.obstructions[0], Obstruction::NonLargeLabel { label: 2, .. }));
    }

    #[test]
    fn isolated_odd_component_is_not_hanging() {
        // Disconnected: an isolated component is valence 0 in the odd
        // component graph, hence not hanging (a leaf needs an edge).
        let g = parse_graph("vertex a\nvertex b\nvertex c\nvertex d\nedge a b 4\nedge c d 3\n").unwrap();
        let dec = odd_decomposition(&g);
        let comp_cd = dec.component_of(g.vertex("c").unwrap());
        assert_eq!(dec.kind(comp_cd), HangingKind::NotHanging);
        // {a} and {b} form a needle pair.
        let comp_a = dec.component_of(g.vertex("a").unwrap());
        assert_eq!(dec.kind(comp_a), HangingKind::Needle);
    }

    #[test]
    fn known_classes_flags() {
        let k = known_classes_report(&gamma1());
        assert!(!k.triangle_free && !k.even && !k.xxxl);
        assert!(k.free_of_infinity && k.single_odd_component);
        let even_path = LabelledGraph::from_parts(&[], &[("a", "b", 4), ("b", "c", 6)]).unwrap();
        let k = known_classes_report(&even_path);
        assert!(k.triangle_free && k.even && !k.xxxl && !k.free_of_infinity);
        assert!(!k.single_odd_component);
    }
}
