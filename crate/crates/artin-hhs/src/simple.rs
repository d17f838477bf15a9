//! Unlabelled simple graphs on integer vertices.
//!
//! This is the substrate shared by the blowup machinery (augmented
//! graphs, links), the product region graph, and the random model's
//! connectivity tests. Vertices are `0..n`; parallel edges and loops
//! are rejected at insertion.

use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<BTreeSet<usize>>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph {
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Inserts the edge `{u, v}`. Loops are ignored rather than stored;
    /// reinsertion is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n() && v < self.n(), "vertex out of range");
        if u == v {
            return;
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, u: usize) -> &BTreeSet<usize> {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    /// Breadth-first distances from `src`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, src: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n()];
        dist[src] = Some(0);
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Connected components as sorted vertex lists, ordered by least member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut comps = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Diameter of the graph; `None` when some pair is not connected.
    /// The empty and one-vertex graphs have diameter 0.
    pub fn diameter(&self) -> Option<u32> {
        if self.n() <= 1 {
            return Some(0);
        }
        let mut best = 0;
        for u in 0..self.n() {
            for d in self.bfs_distances(u) {
                match d {
                    None => return None,
                    Some(d) => best = best.max(d),
                }
            }
        }
        Some(best)
    }

    /// Induced subgraph on `verts` (which need not be sorted). Returns the
    /// graph on `0..verts.len()` with vertex `i` standing for `verts[i]`.
    pub fn induced(&self, verts: &[usize]) -> SimpleGraph {
        let mut pos = std::collections::BTreeMap::new();
        for (i, &v) in verts.iter().enumerate() {
            pos.insert(v, i);
        }
        let mut g = SimpleGraph::new(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            for &w in &self.adj[v] {
                if let Some(&j) = pos.get(&w) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> SimpleGraph {
        let mut g = SimpleGraph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    #[test]
    fn bfs_on_cycle() {
        let g = cycle(6);
        let d = g.bfs_distances(0);
        assert_eq!(d, vec![Some(0), Some(1), Some(2), Some(3), Some(2), Some(1)]);
        assert_eq!(g.diameter(), Some(3));
    }

    #[test]
    fn components_and_induced() {
        let mut g = SimpleGraph::new(5);
        g.add_edge(0, 1);
        g.add_edge(3, 4);
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
        assert!(!g.is_connected());
        assert_eq!(g.diameter(), None);
        let h = g.induced(&[3, 4]);
        assert!(h.has_edge(0, 1));
        assert!(h.is_connected());
    }

    #[test]
    fn loops_are_dropped() {
        let mut g = SimpleGraph::new(2);
        g.add_edge(1, 1);
        assert_eq!(g.edge_count(), 0);
    }
}
