//! Straight-line graphs produced by the mesher.
//!
//! Vertices are exact dyadic points and deduplicate by coordinates on
//! insertion, so two boxes that place a vertex on their shared segment
//! automatically agree on its identity. Edges are undirected, unique, and
//! never self-loops.

use crate::numeric::Dyadic;
use std::collections::{BTreeMap, HashMap, HashSet};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VertexTag {
    /// Midpoint of an interior or boundary segment of the subdivision.
    SegmentMidpoint,
    /// Vertex of a collar gadget (boundary augmentation).
    AugmentedCollar,
    /// Center of an isolating rectangle of a singular point.
    SingularCenter,
}

impl VertexTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            VertexTag::SegmentMidpoint => "segment-midpoint",
            VertexTag::AugmentedCollar => "augmented-collar",
            VertexTag::SingularCenter => "singular-center",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct PLGraph {
    points: Vec<(Dyadic, Dyadic)>,
    tags: Vec<VertexTag>,
    edges: Vec<(usize, usize)>,
    index: HashMap<(Dyadic, Dyadic), usize>,
    edge_set: HashSet<(usize, usize)>,
}

impl PLGraph {
    pub fn new() -> Self {
        PLGraph::default()
    }

    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, v: usize) -> &(Dyadic, Dyadic) {
        &self.points[v]
    }

    pub fn tag(&self, v: usize) -> VertexTag {
        self.tags[v]
    }

    pub fn points(&self) -> &[(Dyadic, Dyadic)] {
        &self.points
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Insert or find the vertex at `p`. A point is never re-tagged; the
    /// construction never places vertices of different roles at one point.
    pub fn add_vertex(&mut self, p: (Dyadic, Dyadic), tag: VertexTag) -> usize {
        if let Some(&v) = self.index.get(&p) {
            debug_assert_eq!(self.tags[v], tag, "vertex role collision at a point");
            return v;
        }
        let v = self.points.len();
        self.points.push(p.clone());
        self.tags.push(tag);
        self.index.insert(p, v);
        v
    }

    pub fn find_vertex(&self, p: &(Dyadic, Dyadic)) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Insert the undirected edge {a, b}; duplicates are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b, "self-loop");
        assert!(a < self.points.len() && b < self.points.len());
        let key = (a.min(b), a.max(b));
        if self.edge_set.insert(key) {
            self.edges.push(key);
        }
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.points.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    /// Connected components as sorted vertex lists, ordered by smallest
    /// contained vertex index (deterministic).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.points.len()];
        let mut out = Vec::new();
        for start in 0..self.points.len() {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Copy the subgraph induced by `keep`, returning the new graph and the
    /// old-to-new vertex index mapping.
    pub fn subgraph(&self, keep: impl Fn(usize) -> bool) -> (PLGraph, Vec<Option<usize>>) {
        let mut g = PLGraph::new();
        let mut map = vec![None; self.points.len()];
        for (v, slot) in map.iter_mut().enumerate() {
            if keep(v) {
                *slot = Some(g.add_vertex(self.points[v].clone(), self.tags[v]));
            }
        }
        for &(a, b) in &self.edges {
            if let (Some(na), Some(nb)) = (map[a], map[b]) {
                g.add_edge(na, nb);
            }
        }
        (g, map)
    }

    pub fn topology_summary(&self) -> Vec<ComponentSummary> {
        let adj = self.adjacency();
        self.components()
            .into_iter()
            .map(|comp| {
                let vset: HashSet<usize> = comp.iter().copied().collect();
                let edges = self
                    .edges
                    .iter()
                    .filter(|(a, _)| vset.contains(a))
                    .count();
                let mut degree_histogram = BTreeMap::new();
                let mut singular_degrees = Vec::new();
                for &v in &comp {
                    let d = adj[v].len();
                    *degree_histogram.entry(d).or_insert(0usize) += 1;
                    if self.tags[v] == VertexTag::SingularCenter {
                        singular_degrees.push(d);
                    }
                }
                singular_degrees.sort_unstable();
                ComponentSummary {
                    vertices: comp.len(),
                    edges,
                    cycle_rank: edges + 1 - comp.len(),
                    degree_histogram,
                    singular_degrees,
                }
            })
            .collect()
    }
}

/// Shape facts about one connected component.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComponentSummary {
    pub vertices: usize,
    pub edges: usize,
    /// Independent cycles (E - V + 1 within one component).
    pub cycle_rank: usize,
    /// degree -> how many vertices have it.
    pub degree_histogram: BTreeMap<usize, usize>,
    /// Degrees of the singular-center vertices, sorted.
    pub singular_degrees: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> (Dyadic, Dyadic) {
        (Dyadic::from_int(x), Dyadic::from_int(y))
    }

    #[test]
    fn dedup_and_summary() {
        let mut g = PLGraph::new();
        let a = g.add_vertex(pt(0, 0), VertexTag::SegmentMidpoint);
        let b = g.add_vertex(pt(1, 0), VertexTag::SegmentMidpoint);
        let c = g.add_vertex(pt(0, 1), VertexTag::SegmentMidpoint);
        assert_eq!(g.add_vertex(pt(0, 0), VertexTag::SegmentMidpoint), a);
        g.add_edge(a, b);
        g.add_edge(b, c);
        g.add_edge(c, a);
        g.add_edge(b, a);
        assert_eq!(g.edge_count(), 3);
        let iso = g.add_vertex(pt(5, 5), VertexTag::SegmentMidpoint);
        let iso2 = g.add_vertex(pt(6, 5), VertexTag::SegmentMidpoint);
        g.add_edge(iso, iso2);
        let summary = g.topology_summary();
        assert_eq!(summary.len(), 2);
        assert_eq!(summary[0].cycle_rank, 1);
        assert_eq!(summary[0].vertices, 3);
        assert_eq!(summary[1].cycle_rank, 0);
        assert_eq!(summary[1].degree_histogram.get(&1), Some(&2));
    }

    #[test]
    fn star_degrees() {
        let mut g = PLGraph::new();
        let center = g.add_vertex(pt(0, 0), VertexTag::SingularCenter);
        for (i, p) in [pt(1, 0), pt(0, 1), pt(-1, 0), pt(0, -1)].into_iter().enumerate() {
            let v = g.add_vertex(p, VertexTag::SegmentMidpoint);
            g.add_edge(center, v);
            assert_eq!(g.degree(v), 1, "spoke {i}");
        }
        let s = &g.topology_summary()[0];
        assert_eq!(s.singular_degrees, vec![4]);
        assert_eq!(s.cycle_rank, 0);
    }

    #[test]
    fn subgraph_keeps_structure() {
        let mut g = PLGraph::new();
        let a = g.add_vertex(pt(0, 0), VertexTag::SegmentMidpoint);
        let b = g.add_vertex(pt(1, 0), VertexTag::SegmentMidpoint);
        let c = g.add_vertex(pt(2, 0), VertexTag::AugmentedCollar);
        g.add_edge(a, b);
        g.add_edge(b, c);
        let (sub, map) = g.subgraph(|v| v != a);
        assert_eq!(sub.vertex_count(), 2);
        assert_eq!(sub.edge_count(), 1);
        assert_eq!(map[a], None);
        assert_eq!(sub.tag(map[c].unwrap()), VertexTag::AugmentedCollar);
    }
}
