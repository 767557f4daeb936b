//! Graph surgeries: pinching, stabilisation, flattening, multi-edge removal,
//! vertex expansion, double-edge insertion and attachment.

use num_bigint::BigUint;
use thiserror::Error;

use crate::multigraph::{GraphError, Multigraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("edge {0} is a loop")]
    LoopEdge(usize),
    #[error("edge {edge} lies in a class of multiplicity {multiplicity}")]
    Multiplicity { edge: usize, multiplicity: usize },
    #[error("vertex {vertex} has degree {degree}")]
    BadValence { vertex: Vertex, degree: usize },
    #[error("vertex {0} carries a loop")]
    LoopAtVertex(Vertex),
    #[error("component without a vertex of valence 3: {0:?}")]
    Degenerate(Vec<Vertex>),
    #[error("free double edges joined by a simple edge along {0:?}")]
    FlattenConflict(Vec<Vertex>),
    #[error("genus {0} is below 3")]
    GenusTooSmall(i64),
    #[error("vertex {vertex} has valence {valence}; attaching adds {added}")]
    ValenceMismatch { vertex: Vertex, valence: usize, added: usize },
}

/// A trivalent graph with one edge (or parallel class) pinched.
#[derive(Debug, Clone)]
pub struct PinchedGraph {
    pub graph: Multigraph,
    /// The unique vertex of valence 2.
    pub pinch_vertex: Vertex,
}

#[derive(Debug, Clone)]
pub struct StabilizationOutcome {
    pub graph: Multigraph,
    pub created_loops: usize,
    pub suppressed_paths: usize,
}

#[derive(Debug, Clone)]
pub struct Flattened {
    pub graph: Multigraph,
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expansion {
    Triangle,
    K23,
}

#[derive(Debug, Clone)]
pub enum Attachment {
    Loop,
    /// A cone, identified along its valence-2 vertex.
    Cone,
    /// Any graph, identified along the given vertex.
    Marked(Multigraph, Vertex),
}

/// Rebuilds an edge list after deleting the vertices flagged in `removed`.
fn compact(n: usize, edges: &[(Vertex, Vertex)], removed: &[bool]) -> Multigraph {
    let mut map = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if !removed[v] {
            map[v] = next;
            next += 1;
        }
    }
    let edges: Vec<_> = edges.iter().map(|&(u, v)| (map[u], map[v])).collect();
    Multigraph::from_edges_unchecked(next, &edges)
}

fn third_neighbour(g: &Multigraph, v: Vertex, exclude: &[usize]) -> Result<(usize, Vertex), TransformError> {
    let others: Vec<usize> = g.darts_at(v).iter().map(|&d| d / 2).filter(|e| !exclude.contains(e)).collect();
    match others.as_slice() {
        [e] => {
            let (a, b) = g.edge(*e);
            Ok((*e, if a == v { b } else { a }))
        }
        _ => Err(TransformError::BadValence { vertex: v, degree: g.degree(v) }),
    }
}

/// Pinches edge `edge` of `g`, acting on its whole parallel class.
pub fn pinch(g: &Multigraph, edge: usize) -> Result<PinchedGraph, TransformError> {
    let class = g.class_of_edge(edge)?;
    if class.is_loop() {
        return Err(TransformError::LoopEdge(edge));
    }
    let n = g.vertex_count();
    let (u, v) = (class.u, class.v);
    match class.multiplicity() {
        1 | 3 => {
            // subdivide one edge; for a triple edge this leaves a cone
            let p = n;
            let mut edges = g.edge_list();
            edges[edge] = (u, p);
            edges.push((p, v));
            Ok(PinchedGraph { graph: Multigraph::from_edges_unchecked(n + 1, &edges), pinch_vertex: p })
        }
        2 => {
            let (ea, a) = third_neighbour(g, u, &class.edges)?;
            let (eb, b) = third_neighbour(g, v, &class.edges)?;
            let (x, y) = (n, n + 1);
            let mut edges: Vec<(Vertex, Vertex)> = g
                .edges()
                .enumerate()
                .filter(|(i, _)| !class.edges.contains(i) && *i != ea && *i != eb)
                .map(|(_, e)| e)
                .collect();
            edges.extend([(u, a), (u, b), (u, x), (x, y), (x, y)]);
            let mut removed = vec![false; n + 2];
            removed[v] = true;
            let graph = compact(n + 2, &edges, &removed);
            Ok(PinchedGraph { graph, pinch_vertex: n })
        }
        m => Err(TransformError::Multiplicity { edge, multiplicity: m }),
    }
}

pub fn pinched_aut_order(g: &Multigraph, edge: usize) -> Result<BigUint, TransformError> {
    Ok(pinch(g, edge)?.graph.aut_order())
}

/// Replaces every maximal path through valence-2 vertices by a single edge.
pub fn stabilize(g: &Multigraph) -> Result<StabilizationOutcome, TransformError> {
    let n = g.vertex_count();
    if let Some(v) = (0..n).find(|&v| g.degree(v) < 2) {
        return Err(TransformError::BadValence { vertex: v, degree: g.degree(v) });
    }
    let mut visited = vec![false; n];
    let mut edges = Vec::new();
    let mut created_loops = 0;
    let mut suppressed_paths = 0;
    for u in (0..n).filter(|&u| g.degree(u) != 2) {
        visited[u] = true;
        for &start in g.darts_at(u) {
            let mut d = g.mate(start);
            let mut interior = 0;
            while g.degree(g.vertex_of(d)) == 2 {
                let w = g.vertex_of(d);
                visited[w] = true;
                interior += 1;
                d = g.mate(*g.darts_at(w).iter().find(|&&x| x != d).unwrap());
            }
            // each path is met from both ends; keep it once
            if start > d {
                continue;
            }
            let w = g.vertex_of(d);
            edges.push((u, w));
            if interior > 0 {
                suppressed_paths += 1;
                if u == w {
                    created_loops += 1;
                }
            }
        }
    }
    let leftover: Vec<Vertex> = (0..n).filter(|&v| !visited[v]).collect();
    if !leftover.is_empty() {
        return Err(TransformError::Degenerate(leftover));
    }
    let removed: Vec<bool> = (0..n).map(|v| g.degree(v) == 2).collect();
    Ok(StabilizationOutcome { graph: compact(n, &edges, &removed), created_loops, suppressed_paths })
}

/// Replaces each free double edge together with its two adjacent simple
/// edges by one simple edge.
pub fn flatten(g: &Multigraph) -> Result<Flattened, TransformError> {
    let census = g.free_double_edges_and_cones();
    let n = g.vertex_count();
    let mut in_double = vec![None; n];
    for (i, &(u, v)) in census.free_doubles.iter().enumerate() {
        in_double[u] = Some(i);
        in_double[v] = Some(i);
    }
    let mut drop_edges = vec![false; g.edge_count()];
    let mut new_edges = Vec::new();
    let mut removed = vec![false; n];
    for &(u, v) in &census.free_doubles {
        let doubled = g.parallel_classes().into_iter().find(|c| (c.u, c.v) == (u, v)).unwrap();
        let (ea, a) = third_neighbour(g, u, &doubled.edges)?;
        let (eb, b) = third_neighbour(g, v, &doubled.edges)?;
        for (end, other) in [(a, u), (b, v)] {
            if let Some(j) = in_double[end] {
                let (p, q) = census.free_doubles[j];
                let far = if p == end { q } else { p };
                let near = if other == u { v } else { u };
                return Err(TransformError::FlattenConflict(vec![near, other, end, far]));
            }
        }
        for e in doubled.edges.iter().copied().chain([ea, eb]) {
            drop_edges[e] = true;
        }
        removed[u] = true;
        removed[v] = true;
        new_edges.push((a, b));
    }
    let mut edges: Vec<(Vertex, Vertex)> =
        g.edges().enumerate().filter(|(i, _)| !drop_edges[*i]).map(|(_, e)| e).collect();
    edges.extend(new_edges);
    Ok(Flattened { graph: compact(n, &edges, &removed), k: census.free_doubles.len() })
}

/// Removes parallel edges: each cone's double edge becomes two loops, each
/// free double edge is contracted and a pendant loop hung from the new vertex.
pub fn simplify_multiedges(g: &Multigraph) -> Result<Multigraph, TransformError> {
    if g.genus() < 3 {
        return Err(TransformError::GenusTooSmall(g.genus()));
    }
    if let Some(v) = (0..g.vertex_count()).find(|&v| g.degree(v) != 3) {
        return Err(TransformError::BadValence { vertex: v, degree: g.degree(v) });
    }
    let mut cur = g.clone();
    loop {
        let Some(class) = cur.parallel_classes().into_iter().find(|c| !c.is_loop() && c.multiplicity() > 1) else {
            return Ok(cur);
        };
        if class.multiplicity() > 2 {
            return Err(TransformError::Multiplicity { edge: class.edges[0], multiplicity: class.multiplicity() });
        }
        let (u, v) = (class.u, class.v);
        let mut edges = cur.edge_list();
        let is_cone = cur.free_double_edges_and_cones().cones.iter().any(|c| c.double == (u, v));
        if is_cone {
            edges[class.edges[0]] = (u, u);
            edges[class.edges[1]] = (v, v);
            cur = Multigraph::from_edges_unchecked(cur.vertex_count(), &edges);
        } else {
            let (eb, b) = third_neighbour(&cur, v, &class.edges)?;
            edges[eb] = (u, b);
            edges[class.edges[0]] = (u, v);
            edges[class.edges[1]] = (v, v);
            cur = Multigraph::from_edges_unchecked(cur.vertex_count(), &edges);
        }
    }
}

/// Replaces vertex `v` by a triangle or by `K_{2,3}`, its former edges going
/// to distinct vertices of valence 2 in the inserted piece.
pub fn expand_vertex(g: &Multigraph, v: Vertex, mode: Expansion) -> Result<Multigraph, TransformError> {
    if v >= g.vertex_count() {
        return Err(GraphError::VertexOutOfRange { vertex: v, count: g.vertex_count() }.into());
    }
    if g.loops_at(v) > 0 {
        return Err(TransformError::LoopAtVertex(v));
    }
    if g.degree(v) != 3 {
        return Err(TransformError::BadValence { vertex: v, degree: g.degree(v) });
    }
    let n = g.vertex_count();
    let ports = [v, n, n + 1];
    let mut edges = g.edge_list();
    for (i, &d) in g.darts_at(v).iter().enumerate() {
        let e = &mut edges[d / 2];
        if d % 2 == 0 {
            e.0 = ports[i];
        } else {
            e.1 = ports[i];
        }
    }
    let total = match mode {
        Expansion::Triangle => {
            edges.extend([(ports[0], ports[1]), (ports[1], ports[2]), (ports[2], ports[0])]);
            n + 2
        }
        Expansion::K23 => {
            for hub in [n + 2, n + 3] {
                edges.extend(ports.iter().map(|&p| (p, hub)));
            }
            n + 4
        }
    };
    Ok(Multigraph::from_edges_unchecked(total, &edges))
}

/// Replaces simple edge `edge` by a path whose middle edge is doubled.
pub fn insert_double_edge(g: &Multigraph, edge: usize) -> Result<Multigraph, TransformError> {
    let class = g.class_of_edge(edge)?;
    if class.is_loop() {
        return Err(TransformError::LoopEdge(edge));
    }
    if class.multiplicity() != 1 {
        return Err(TransformError::Multiplicity { edge, multiplicity: class.multiplicity() });
    }
    let (u, v) = g.edge(edge);
    let n = g.vertex_count();
    let (p, q) = (n, n + 1);
    let mut edges = g.edge_list();
    edges[edge] = (u, p);
    edges.extend([(p, q), (p, q), (q, v)]);
    Ok(Multigraph::from_edges_unchecked(n + 2, &edges))
}

/// The cone: a triangle `0 1 2` with edge `0 1` doubled; vertex 2 has valence 2.
pub fn cone() -> Multigraph {
    Multigraph::from_edges_unchecked(3, &[(0, 1), (0, 1), (0, 2), (1, 2)])
}

/// Attaches `what` by identifying its attachment vertex with `at`.
pub fn attach(g: &Multigraph, at: Vertex, what: &Attachment) -> Result<Multigraph, TransformError> {
    if at >= g.vertex_count() {
        return Err(GraphError::VertexOutOfRange { vertex: at, count: g.vertex_count() }.into());
    }
    let (h, x) = match what {
        Attachment::Loop => (Multigraph::from_edges_unchecked(1, &[(0, 0)]), 0),
        Attachment::Cone => (cone(), 2),
        Attachment::Marked(h, x) => {
            if *x >= h.vertex_count() {
                return Err(GraphError::VertexOutOfRange { vertex: *x, count: h.vertex_count() }.into());
            }
            (h.clone(), *x)
        }
    };
    let valence = g.degree(at);
    let added = h.degree(x);
    if valence + added != 3 {
        return Err(TransformError::ValenceMismatch { vertex: at, valence, added });
    }
    Ok(identify(g, at, &h, x))
}

/// Disjoint union with `h`, then `x` (in `h`) merged into `at` (in `g`).
/// `h`'s other vertices follow `g`'s in their original order.
pub fn identify(g: &Multigraph, at: Vertex, h: &Multigraph, x: Vertex) -> Multigraph {
    let n = g.vertex_count();
    let map = |w: Vertex| match w.cmp(&x) {
        std::cmp::Ordering::Equal => at,
        std::cmp::Ordering::Less => n + w,
        std::cmp::Ordering::Greater => n + w - 1,
    };
    let mut edges = g.edge_list();
    edges.extend(h.edges().map(|(a, b)| (map(a), map(b))));
    Multigraph::from_edges_unchecked(n + h.vertex_count() - 1, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(edges: &[(usize, usize)]) -> Multigraph {
        Multigraph::build(edges).unwrap()
    }

    fn k4() -> Multigraph {
        graph(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn pinch_triple_gives_cone() {
        let theta = graph(&[(0, 1), (0, 1), (0, 1)]);
        let p = pinch(&theta, 1).unwrap();
        assert!(p.graph.is_isomorphic(&cone()).unwrap());
        assert_eq!(p.graph.degree(p.pinch_vertex), 2);
        assert_eq!(p.graph.aut_order(), BigUint::from(4u32));
    }

    #[test]
    fn pinch_simple_and_double() {
        let p = pinch(&k4(), 0).unwrap();
        assert_eq!((p.graph.vertex_count(), p.graph.genus()), (5, 3));
        assert_eq!(p.graph.aut_order(), BigUint::from(4u32));
        let dumbbell = graph(&[(0, 0), (0, 1), (1, 1)]);
        assert_eq!(pinch(&dumbbell, 1).unwrap().graph.genus(), 2);
        assert_eq!(pinch(&dumbbell, 0).unwrap_err(), TransformError::LoopEdge(0));
        // square with opposite sides doubled
        let c3 = graph(&[(0, 1), (0, 1), (1, 2), (2, 3), (2, 3), (3, 0)]);
        let p = pinch(&c3, 0).unwrap();
        assert_eq!(p.graph.genus(), 3);
        assert_eq!(p.graph.degrees().iter().filter(|&&d| d == 2).count(), 1);
        assert_eq!(p.graph.degree(p.pinch_vertex), 2);
        assert_eq!(pinched_aut_order(&c3, 2).unwrap(), BigUint::from(8u32));
    }

    #[test]
    fn stabilize_examples() {
        let s = stabilize(&pinch(&k4(), 3).unwrap().graph).unwrap();
        assert!(s.graph.is_isomorphic(&k4()).unwrap());
        assert_eq!((s.created_loops, s.suppressed_paths), (0, 1));
        // a vertex of valence 3 on a cycle of length 3
        let g = Multigraph::with_vertices(4, &[(0, 1), (1, 2), (2, 0), (0, 3)]).unwrap();
        assert!(matches!(stabilize(&g), Err(TransformError::BadValence { vertex: 3, .. })));
        let g = graph(&[(0, 1), (1, 2), (2, 0), (0, 3), (3, 3)]);
        let s = stabilize(&g).unwrap();
        assert_eq!(s.created_loops, 1);
        assert_eq!(s.graph.sorted_edges(), vec![(0, 0), (0, 1), (1, 1)]);
        let cycle = graph(&[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(stabilize(&cycle).unwrap_err(), TransformError::Degenerate(vec![0, 1, 2]));
    }

    #[test]
    fn expansion_and_insertion() {
        let star = graph(&[(0, 1), (0, 2), (0, 3)]);
        let t = expand_vertex(&star, 0, Expansion::Triangle).unwrap();
        assert_eq!((t.vertex_count(), t.edge_count(), t.genus()), (6, 6, 1));
        let k = expand_vertex(&star, 0, Expansion::K23).unwrap();
        assert_eq!((k.vertex_count(), k.edge_count(), k.genus()), (8, 9, 2));
        let d = insert_double_edge(&graph(&[(0, 1)]), 0).unwrap();
        assert_eq!((d.vertex_count(), d.edge_count()), (4, 4));
        let looped = graph(&[(0, 0), (0, 1)]);
        assert_eq!(expand_vertex(&looped, 0, Expansion::Triangle).unwrap_err(), TransformError::LoopAtVertex(0));
    }

    #[test]
    fn attach_rules() {
        let edge = graph(&[(0, 1)]);
        let g = attach(&edge, 0, &Attachment::Loop).unwrap();
        assert_eq!(g.degree(0), 3);
        let g = attach(&g, 1, &Attachment::Cone).unwrap();
        assert!(g.is_trivalent());
        assert_eq!(g.genus(), 3);
        assert!(matches!(attach(&g, 0, &Attachment::Loop), Err(TransformError::ValenceMismatch { .. })));
    }
}
