//! Edge orbits, their shapes, double-edge census and orbit removal.

use serde::Serialize;

use super::canon::UnionFind;
use super::{Multigraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitShape {
    WholeGraph,
    Stars,
    IsolatedEdges,
    Cycles,
    /// None of the above; never a minimal orbit of a trivalent graph.
    Other,
}

impl OrbitShape {
    pub fn name(self) -> &'static str {
        match self {
            OrbitShape::WholeGraph => "whole-graph",
            OrbitShape::Stars => "stars",
            OrbitShape::IsolatedEdges => "isolated-edges",
            OrbitShape::Cycles => "cycles",
            OrbitShape::Other => "other",
        }
    }
}

/// An orbit of parallel classes under the vertex-level automorphism group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeOrbit {
    /// Parallel classes as `(u, v)` with `u <= v`, ascending.
    pub classes: Vec<(Vertex, Vertex)>,
    /// Edge ids of all edges in those classes, ascending.
    pub edges: Vec<usize>,
    /// Number of edges, counting multiplicity.
    pub size: usize,
    pub multiplicity: usize,
    pub shape: OrbitShape,
    /// Edge counts of the cycles when `shape` is `Cycles`, ascending.
    pub cycle_lengths: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Orbits {
    pub vertex_orbits: Vec<Vec<Vertex>>,
    /// Sorted by the canonical position of their least class.
    pub edge_orbits: Vec<EdgeOrbit>,
    /// Size of a minimal edge orbit.
    pub m: usize,
}

impl Orbits {
    pub fn minimal(&self) -> impl Iterator<Item = &EdgeOrbit> {
        self.edge_orbits.iter().filter(move |o| o.size == self.m)
    }

    pub fn orbit_of_edge(&self, edge: usize) -> Option<&EdgeOrbit> {
        self.edge_orbits.iter().find(|o| o.edges.binary_search(&edge).is_ok())
    }
}

/// A component left after deleting an orbit of edges.
#[derive(Debug, Clone)]
pub struct RemovedComponent {
    /// The component relabelled to `0..vertices.len()`.
    pub graph: Multigraph,
    /// Original vertex of each component vertex.
    pub vertices: Vec<Vertex>,
    pub genus: i64,
    /// Component vertices (local labels) that lost edges.
    pub marks: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cone {
    /// The doubled triangle edge.
    pub double: (Vertex, Vertex),
    /// The triangle vertex opposite the double edge.
    pub apex: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleEdgeCensus {
    pub free_doubles: Vec<(Vertex, Vertex)>,
    pub cones: Vec<Cone>,
}

pub(super) fn compute(g: &Multigraph) -> Orbits {
    let group = g.automorphism_group();
    let labelling = group.canonical_labelling();
    let classes = g.parallel_classes();
    let index: std::collections::HashMap<(Vertex, Vertex), usize> =
        classes.iter().enumerate().map(|(i, c)| ((c.u, c.v), i)).collect();
    let mut uf = UnionFind::new(classes.len());
    for gen in group.generators() {
        for (i, c) in classes.iter().enumerate() {
            let (a, b) = (gen[c.u], gen[c.v]);
            uf.union(i, index[&(a.min(b), a.max(b))]);
        }
    }
    let canonical_key = |u: Vertex, v: Vertex| {
        let (a, b) = (labelling[u], labelling[v]);
        (a.min(b), a.max(b))
    };
    let mut orbits: Vec<((usize, usize), EdgeOrbit)> = uf
        .classes()
        .into_iter()
        .map(|members| {
            let key = members.iter().map(|&i| canonical_key(classes[i].u, classes[i].v)).min().unwrap();
            let mut edges: Vec<usize> = members.iter().flat_map(|&i| classes[i].edges.clone()).collect();
            edges.sort_unstable();
            let class_list: Vec<(Vertex, Vertex)> = members.iter().map(|&i| (classes[i].u, classes[i].v)).collect();
            let (shape, cycle_lengths) = classify(g, &edges);
            let orbit = EdgeOrbit {
                multiplicity: classes[members[0]].multiplicity(),
                size: edges.len(),
                classes: class_list,
                edges,
                shape,
                cycle_lengths,
            };
            (key, orbit)
        })
        .collect();
    orbits.sort_by_key(|(k, _)| *k);
    let edge_orbits: Vec<EdgeOrbit> = orbits.into_iter().map(|(_, o)| o).collect();
    let m = edge_orbits.iter().map(|o| o.size).min().unwrap_or(0);
    Orbits { vertex_orbits: group.vertex_orbits(), edge_orbits, m }
}

/// Shape of the subgraph formed by `edges`.
fn classify(g: &Multigraph, edges: &[usize]) -> (OrbitShape, Vec<usize>) {
    if edges.len() == g.edge_count() {
        return (OrbitShape::WholeGraph, Vec::new());
    }
    let sub = edge_subgraph(g, edges);
    let mut h_degree = vec![0usize; g.vertex_count()];
    for &e in edges {
        let (u, v) = g.edge(e);
        h_degree[u] += 1;
        h_degree[v] += 1;
    }
    let comps: Vec<Vec<Vertex>> = sub.components().into_iter().filter(|c| c.iter().any(|&v| h_degree[v] > 0)).collect();
    let comp_edges = |c: &[Vertex]| edges.iter().filter(|&&e| c.contains(&g.edge(e).0)).count();

    let is_star = |c: &Vec<Vertex>| {
        c.len() == 4
            && comp_edges(c) == 3
            && c.iter().filter(|&&v| h_degree[v] == 3).count() == 1
            && c.iter().filter(|&&v| h_degree[v] == 1).count() == 3
    };
    let is_edge = |c: &Vec<Vertex>| c.len() == 2 && comp_edges(c) == 1;
    let is_cycle = |c: &Vec<Vertex>| c.iter().all(|&v| h_degree[v] == 2) && comp_edges(c) == c.len();

    if comps.iter().all(is_star) {
        (OrbitShape::Stars, Vec::new())
    } else if comps.iter().all(is_edge) {
        (OrbitShape::IsolatedEdges, Vec::new())
    } else if comps.iter().all(is_cycle) {
        let mut lengths: Vec<usize> = comps.iter().map(|c| comp_edges(c)).collect();
        lengths.sort_unstable();
        (OrbitShape::Cycles, lengths)
    } else {
        (OrbitShape::Other, Vec::new())
    }
}

/// Spanning subgraph keeping only `edges`.
fn edge_subgraph(g: &Multigraph, edges: &[usize]) -> Multigraph {
    let list: Vec<(Vertex, Vertex)> = edges.iter().map(|&e| g.edge(e)).collect();
    Multigraph::from_edges_unchecked(g.vertex_count(), &list)
}

impl Multigraph {
    /// Vertex sets of the components of the subgraph formed by `orbit`'s edges.
    pub fn orbit_components(&self, orbit: &EdgeOrbit) -> Vec<Vec<Vertex>> {
        let sub = edge_subgraph(self, &orbit.edges);
        sub.components().into_iter().filter(|c| c.iter().any(|&v| sub.degree(v) > 0)).collect()
    }

    /// Least distance between two distinct cycles of a `Cycles` orbit.
    pub fn cycle_separation(&self, orbit: &EdgeOrbit) -> Option<usize> {
        let comps = self.orbit_components(orbit);
        let mut best: Option<usize> = None;
        for i in 0..comps.len() {
            for j in i + 1..comps.len() {
                if let Some(d) = self.set_distance(&comps[i], &comps[j]) {
                    best = Some(best.map_or(d, |b| b.min(d)));
                }
            }
        }
        best
    }

    /// The first minimal orbit that is not made of cycles; when every minimal
    /// orbit is made of cycles, the orbit of the third edge at a cycle vertex.
    pub fn well_chosen_orbit(&self) -> EdgeOrbit {
        let orbits = self.orbits();
        self.well_chosen_from(&orbits)
    }

    pub fn well_chosen_from(&self, orbits: &Orbits) -> EdgeOrbit {
        if let Some(o) = orbits.minimal().find(|o| o.shape != OrbitShape::Cycles) {
            return o.clone();
        }
        let cyc = orbits.minimal().next().expect("a graph with edges has an orbit");
        let (u, _) = cyc.classes[0];
        let f = self
            .darts_at(u)
            .iter()
            .map(|&d| d / 2)
            .find(|e| cyc.edges.binary_search(e).is_err())
            .expect("a cycle vertex of a trivalent graph has a third edge");
        orbits.orbit_of_edge(f).expect("every edge lies in an orbit").clone()
    }

    /// Double edges (classes of multiplicity exactly two), split into those
    /// lying in a cone and the free ones.
    pub fn free_double_edges_and_cones(&self) -> DoubleEdgeCensus {
        let mut free_doubles = Vec::new();
        let mut cones = Vec::new();
        for c in self.parallel_classes() {
            if c.is_loop() || c.multiplicity() != 2 {
                continue;
            }
            let apex = self
                .neighbors(c.u)
                .find(|&w| w != c.u && w != c.v && self.multiplicity(c.u, w) == 1 && self.multiplicity(c.v, w) == 1);
            match apex {
                Some(apex) => cones.push(Cone { double: (c.u, c.v), apex }),
                None => free_doubles.push((c.u, c.v)),
            }
        }
        DoubleEdgeCensus { free_doubles, cones }
    }

    /// Components of the graph with `orbit`'s edges deleted, ignoring
    /// vertices left without edges.
    pub fn remove_orbit(&self, orbit: &EdgeOrbit) -> Vec<RemovedComponent> {
        let rest: Vec<usize> = (0..self.edge_count()).filter(|e| orbit.edges.binary_search(e).is_err()).collect();
        let sub = edge_subgraph(self, &rest);
        sub.components()
            .into_iter()
            .filter(|c| c.iter().any(|&v| sub.degree(v) > 0))
            .map(|vertices| {
                let graph = sub.induced(&vertices, |_| true);
                let marks = (0..vertices.len()).filter(|&i| graph.degree(i) < self.degree(vertices[i])).collect();
                RemovedComponent { genus: graph.genus(), graph, vertices, marks }
            })
            .collect()
    }
}
