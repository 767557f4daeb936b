//! Dart-based connected multigraphs with loops and parallel edges.
//!
//! Edge `i` owns darts `2i` and `2i + 1`; the pairing involution is therefore
//! `d ^ 1` and never has fixed points. A loop is an edge whose two darts sit at
//! the same vertex.

mod canon;
mod mel;
mod orbits;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub(crate) use canon::UnionFind;
pub use canon::{AutomorphismGroup, Certificate};
pub use mel::{parse_mel, parse_mel_stream, MelError, ParseMode};
pub use orbits::{Cone, DoubleEdgeCensus, EdgeOrbit, OrbitShape, Orbits, RemovedComponent};

pub type Vertex = usize;
pub type Dart = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("empty edge list")]
    Empty,
    #[error("vertex indices are not contiguous: vertex {0} has no incident edge")]
    NonContiguous(Vertex),
    #[error("vertex {vertex} out of range for a graph with {count} vertices")]
    VertexOutOfRange { vertex: Vertex, count: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge {0} out of range")]
    EdgeOutOfRange(usize),
}

/// Which restriction of the multigraph world a graph lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GraphClass {
    /// Loops and parallel edges allowed.
    LoopsAllowed,
    /// Parallel edges allowed, no loops.
    Loopless,
    /// No loops, no parallel edges.
    Simple,
}

impl GraphClass {
    pub fn name(self) -> &'static str {
        match self {
            GraphClass::LoopsAllowed => "loops",
            GraphClass::Loopless => "loopless",
            GraphClass::Simple => "simple",
        }
    }

    /// Whether `other` (the tightest class of some graph) belongs to `self`.
    pub fn admits(self, other: GraphClass) -> bool {
        other >= self
    }
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GraphClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "loops" | "loops-allowed" => Ok(GraphClass::LoopsAllowed),
            "loopless" => Ok(GraphClass::Loopless),
            "simple" => Ok(GraphClass::Simple),
            other => Err(format!("unknown graph class `{other}`")),
        }
    }
}

/// A set of parallel edges between `u <= v` (a loop class when `u == v`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelClass {
    pub u: Vertex,
    pub v: Vertex,
    pub edges: Vec<usize>,
}

impl ParallelClass {
    pub fn multiplicity(&self) -> usize {
        self.edges.len()
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicStats {
    pub genus: i64,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub is_connected: bool,
    pub is_trivalent: bool,
    pub graph_class: GraphClass,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    vertex_count: usize,
    /// Vertex of each dart.
    dart_vertex: Vec<Vertex>,
    /// Darts at each vertex, ascending.
    incidence: Vec<Vec<Dart>>,
}

impl fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multigraph({} vertices: ", self.vertex_count)?;
        let edges: Vec<String> = self.edges().map(|(u, v)| format!("{u}-{v}")).collect();
        write!(f, "{})", edges.join(" "))
    }
}

impl Multigraph {
    /// Builds a graph from an edge list whose vertex indices are exactly
    /// `0..n` for some `n`.
    pub fn build(edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        if edges.is_empty() {
            return Err(GraphError::Empty);
        }
        let n = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(0) + 1;
        let g = Self::with_vertices(n, edges)?;
        if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
            return Err(GraphError::NonContiguous(v));
        }
        Ok(g)
    }

    /// Builds a graph on `n` vertices; isolated vertices are permitted.
    pub fn with_vertices(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut dart_vertex = Vec::with_capacity(edges.len() * 2);
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, count: n });
                }
            }
            dart_vertex.push(u);
            dart_vertex.push(v);
        }
        let mut incidence = vec![Vec::new(); n];
        for (d, &v) in dart_vertex.iter().enumerate() {
            incidence[v].push(d);
        }
        Ok(Multigraph { vertex_count: n, dart_vertex, incidence })
    }

    pub(crate) fn from_edges_unchecked(n: usize, edges: &[(Vertex, Vertex)]) -> Self {
        Self::with_vertices(n, edges).expect("edge endpoints within range")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.dart_vertex.len() / 2
    }

    pub fn dart_count(&self) -> usize {
        self.dart_vertex.len()
    }

    pub fn vertex_of(&self, dart: Dart) -> Vertex {
        self.dart_vertex[dart]
    }

    /// The other dart of the same edge.
    pub fn mate(&self, dart: Dart) -> Dart {
        dart ^ 1
    }

    pub fn darts_at(&self, v: Vertex) -> &[Dart] {
        &self.incidence[v]
    }

    pub fn edge(&self, i: usize) -> (Vertex, Vertex) {
        (self.dart_vertex[2 * i], self.dart_vertex[2 * i + 1])
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.dart_vertex.chunks_exact(2).map(|c| (c[0], c[1]))
    }

    pub fn edge_list(&self) -> Vec<(Vertex, Vertex)> {
        self.edges().collect()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.incidence[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.incidence.iter().map(Vec::len).collect()
    }

    /// Neighbours across each dart at `v` (a loop contributes `v` twice).
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.incidence[v].iter().map(move |&d| self.dart_vertex[d ^ 1])
    }

    pub fn loop_count(&self) -> usize {
        self.edges().filter(|(u, v)| u == v).count()
    }

    pub fn loops_at(&self, v: Vertex) -> usize {
        self.incidence[v].iter().filter(|&&d| self.dart_vertex[d ^ 1] == v).count() / 2
    }

    pub fn is_trivalent(&self) -> bool {
        self.incidence.iter().all(|d| d.len() == 3)
    }

    /// First Betti number `e - v + 1` (meaningful for connected graphs).
    pub fn genus(&self) -> i64 {
        self.edge_count() as i64 - self.vertex_count as i64 + 1
    }

    /// Parallel classes sorted by `(u, v)`; loops included with `u == v`.
    pub fn parallel_classes(&self) -> Vec<ParallelClass> {
        let mut map: BTreeMap<(Vertex, Vertex), Vec<usize>> = BTreeMap::new();
        for (i, (u, v)) in self.edges().enumerate() {
            map.entry((u.min(v), u.max(v))).or_default().push(i);
        }
        map.into_iter().map(|((u, v), edges)| ParallelClass { u, v, edges }).collect()
    }

    /// The parallel class containing edge `i`.
    pub fn class_of_edge(&self, i: usize) -> Result<ParallelClass, GraphError> {
        if i >= self.edge_count() {
            return Err(GraphError::EdgeOutOfRange(i));
        }
        let (u, v) = self.edge(i);
        let key = (u.min(v), u.max(v));
        let edges =
            self.edges().enumerate().filter(|&(_, (a, b))| (a.min(b), a.max(b)) == key).map(|(j, _)| j).collect();
        Ok(ParallelClass { u: key.0, v: key.1, edges })
    }

    /// Multiplicity of the class between `u` and `v`.
    pub fn multiplicity(&self, u: Vertex, v: Vertex) -> usize {
        self.incidence[u].iter().filter(|&&d| self.dart_vertex[d ^ 1] == v).count() / if u == v { 2 } else { 1 }
    }

    pub fn graph_class(&self) -> GraphClass {
        let classes = self.parallel_classes();
        if classes.iter().any(ParallelClass::is_loop) {
            GraphClass::LoopsAllowed
        } else if classes.iter().any(|c| c.multiplicity() > 1) {
            GraphClass::Loopless
        } else {
            GraphClass::Simple
        }
    }

    /// Vertex sets of connected components, each ascending, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.vertex_count];
        let mut out = Vec::new();
        for s in 0..self.vertex_count {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count > 0 && self.components().len() == 1
    }

    pub fn basic_stats(&self) -> BasicStats {
        BasicStats {
            genus: self.genus(),
            vertex_count: self.vertex_count,
            edge_count: self.edge_count(),
            is_connected: self.is_connected(),
            is_trivalent: self.is_trivalent(),
            graph_class: self.graph_class(),
        }
    }

    /// Induced subgraph on `vertices`, relabelled in the given order, keeping
    /// only the edges whose ids satisfy `keep`.
    pub fn induced(&self, vertices: &[Vertex], keep: impl Fn(usize) -> bool) -> Multigraph {
        let mut index = vec![usize::MAX; self.vertex_count];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges: Vec<(Vertex, Vertex)> = self
            .edges()
            .enumerate()
            .filter(|&(i, (u, v))| keep(i) && index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|(_, (u, v))| (index[u], index[v]))
            .collect();
        Multigraph::from_edges_unchecked(vertices.len(), &edges)
    }

    /// Applies a vertex relabelling `perm[old] = new`.
    pub fn relabel(&self, perm: &[Vertex]) -> Multigraph {
        let edges: Vec<(Vertex, Vertex)> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Multigraph::from_edges_unchecked(self.vertex_count, &edges)
    }

    /// Edge list normalised to `u <= v` and sorted; identical for equal labelled multigraphs.
    pub fn sorted_edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut e: Vec<_> = self.edges().map(|(u, v)| (u.min(v), u.max(v))).collect();
        e.sort_unstable();
        e
    }

    /// Disjoint union, with `other`'s vertices shifted past ours.
    pub fn disjoint_union(&self, other: &Multigraph) -> Multigraph {
        let shift = self.vertex_count;
        let mut edges = self.edge_list();
        edges.extend(other.edges().map(|(u, v)| (u + shift, v + shift)));
        Multigraph::from_edges_unchecked(self.vertex_count + other.vertex_count, &edges)
    }

    /// Minimum number of edges on a path between two vertex sets.
    pub fn set_distance(&self, a: &[Vertex], b: &[Vertex]) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count];
        let mut queue = VecDeque::new();
        for &v in a {
            dist[v] = 0;
            queue.push_back(v);
        }
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        b.iter().map(|&v| dist[v]).filter(|&d| d != usize::MAX).min()
    }

    pub fn canonical_certificate(&self) -> Result<Certificate, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(canon::certificate(self))
    }

    /// Vertex-level automorphism group of the multiplicity-labelled graph.
    pub fn automorphism_group(&self) -> AutomorphismGroup {
        canon::automorphism_group(self)
    }

    /// Order of the automorphism group under the curve convention: the
    /// vertex-level group order times `m!` for each parallel class of size
    /// `m` and `2^l * l!` for `l` loops at one vertex.
    pub fn aut_order(&self) -> BigUint {
        self.automorphism_group().order() * self.kernel_order()
    }

    /// Order of the subgroup fixing every vertex (parallel-edge swaps and loop flips).
    pub fn kernel_order(&self) -> BigUint {
        let mut k = BigUint::from(1u32);
        for class in self.parallel_classes() {
            let m = class.multiplicity() as u32;
            k *= factorial(m);
            if class.is_loop() {
                k <<= m as usize;
            }
        }
        k
    }

    pub fn is_isomorphic(&self, other: &Multigraph) -> Result<bool, GraphError> {
        Ok(self.canonical_certificate()? == other.canonical_certificate()?)
    }

    /// Canonically relabelled copy.
    pub fn canonical_form(&self) -> Multigraph {
        canon::canonical_form(self)
    }

    pub fn orbits(&self) -> Orbits {
        orbits::compute(self)
    }

    pub fn to_mel(&self) -> String {
        mel::serialize(self)
    }

    pub fn to_canonical_mel(&self) -> String {
        mel::serialize(&self.canonical_form())
    }
}

pub(crate) fn factorial(m: u32) -> BigUint {
    (1..=m).fold(BigUint::from(1u32), |acc, i| acc * i)
}
