//! Canonical labelling and automorphism groups by individualisation and
//! refinement.
//!
//! The multigraph is encoded as a vertex-coloured graph with weighted edges:
//! colour = (degree, loop count), weight = multiplicity of the parallel class.
//! The search tree is the usual one: refine to an equitable ordered partition,
//! individualise a vertex of the target cell, refine again. Every node carries
//! a labelling-invariant quotient; only children with the least quotient are
//! explored, and a leaf's key is its sequence of quotients followed by the
//! relabelled graph. The canonical leaf is the leaf with the least key.
//!
//! Children of a node that are equivalent under the pointwise stabiliser of
//! the node's individualised vertices are detected by searching for a leaf
//! with the same key as an already explored sibling; each hit is an
//! automorphism. Along the leftmost path these hits give exactly the orbit of
//! the individualised vertex in the stabiliser, so the product of those orbit
//! lengths is the group order.

use std::rc::Rc;

use num_bigint::BigUint;

use super::{Multigraph, Vertex};

/// Canonical data for a connected multigraph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate {
    /// MEL text of the canonically relabelled graph.
    pub canonical_bytes: Vec<u8>,
    pub aut_order_vertex_level: BigUint,
    pub loop_count: usize,
    /// Multiplicities of all non-loop parallel classes, ascending.
    pub parallel_class_sizes: Vec<usize>,
}

/// Vertex-level automorphism group of the multiplicity-labelled graph.
#[derive(Debug, Clone)]
pub struct AutomorphismGroup {
    vertex_count: usize,
    generators: Vec<Vec<Vertex>>,
    order: BigUint,
    canonical_labelling: Vec<Vertex>,
}

impl AutomorphismGroup {
    pub fn order(&self) -> BigUint {
        self.order.clone()
    }

    /// Generators as maps `gen[v] = image of v`. May be empty for the trivial group.
    pub fn generators(&self) -> &[Vec<Vertex>] {
        &self.generators
    }

    /// `labelling[v]` = canonical position of vertex `v`.
    pub fn canonical_labelling(&self) -> &[Vertex] {
        &self.canonical_labelling
    }

    /// Vertex orbits, each ascending, ordered by least element.
    pub fn vertex_orbits(&self) -> Vec<Vec<Vertex>> {
        let mut uf = UnionFind::new(self.vertex_count);
        for gen in &self.generators {
            for (v, &w) in gen.iter().enumerate() {
                uf.union(v, w);
            }
        }
        uf.classes()
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root so classes are reported deterministically
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    pub(crate) fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            let r = self.find(v);
            by_root[r].push(v);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }
}

struct Coloured {
    colour: Vec<u64>,
    /// (neighbour, multiplicity), neighbours distinct from the vertex itself.
    adj: Vec<Vec<(u32, u32)>>,
}

impl Coloured {
    fn from_multigraph(g: &Multigraph) -> Self {
        let n = g.vertex_count();
        let mut colour = Vec::with_capacity(n);
        let mut adj = Vec::with_capacity(n);
        for v in 0..n {
            colour.push(((g.degree(v) as u64) << 32) | g.loops_at(v) as u64);
            let mut nbrs: Vec<u32> = g.neighbors(v).filter(|&w| w != v).map(|w| w as u32).collect();
            nbrs.sort_unstable();
            let mut list: Vec<(u32, u32)> = Vec::new();
            for w in nbrs {
                match list.last_mut() {
                    Some((x, m)) if *x == w => *m += 1,
                    _ => list.push((w, 1)),
                }
            }
            adj.push(list);
        }
        Coloured { colour, adj }
    }

    fn len(&self) -> usize {
        self.colour.len()
    }
}

/// Ordered partition. Cells are contiguous runs of `lab`; `cell_of[v]` is the
/// start offset of the cell containing `v` and `cell_len[start]` its length.
#[derive(Clone)]
struct Node {
    lab: Vec<u32>,
    cell_of: Vec<u32>,
    cell_len: Vec<u32>,
    invariant: Rc<Vec<u64>>,
}

impl Node {
    fn root(g: &Coloured) -> Self {
        let n = g.len();
        let mut lab: Vec<u32> = (0..n as u32).collect();
        lab.sort_by_key(|&v| (g.colour[v as usize], v));
        let mut cell_of = vec![0u32; n];
        let mut cell_len = vec![0u32; n];
        let mut p = 0;
        while p < n {
            let c = g.colour[lab[p] as usize];
            let mut q = p;
            while q < n && g.colour[lab[q] as usize] == c {
                cell_of[lab[q] as usize] = p as u32;
                q += 1;
            }
            cell_len[p] = (q - p) as u32;
            p = q;
        }
        let mut node = Node { lab, cell_of, cell_len, invariant: Rc::new(Vec::new()) };
        node.refine(g);
        node
    }

    fn signature(&self, g: &Coloured, v: u32) -> Vec<(u32, u32)> {
        let mut sig: Vec<(u32, u32)> = g.adj[v as usize].iter().map(|&(w, m)| (self.cell_of[w as usize], m)).collect();
        sig.sort_unstable();
        sig
    }

    /// Refines to the coarsest stable ordered partition below the current one.
    fn refine(&mut self, g: &Coloured) {
        let n = self.lab.len();
        loop {
            let mut changed = false;
            let snapshot = self.cell_of.clone();
            let mut p = 0;
            while p < n {
                let len = self.cell_len[p] as usize;
                if len > 1 {
                    let mut items: Vec<(Vec<(u32, u32)>, u32)> =
                        self.lab[p..p + len].iter().map(|&v| (sig_with(&snapshot, g, v), v)).collect();
                    items.sort();
                    if items[0].0 != items[len - 1].0 {
                        changed = true;
                        let mut start = p;
                        for i in 0..len {
                            if i > 0 && items[i].0 != items[i - 1].0 {
                                self.cell_len[start] = (p + i - start) as u32;
                                start = p + i;
                            }
                            self.lab[p + i] = items[i].1;
                            self.cell_of[items[i].1 as usize] = start as u32;
                        }
                        self.cell_len[start] = (p + len - start) as u32;
                    }
                }
                p += len;
            }
            if !changed {
                break;
            }
        }
        let mut inv = Vec::new();
        let mut p = 0;
        while p < n {
            let len = self.cell_len[p] as usize;
            let sig = self.signature(g, self.lab[p]);
            inv.push(len as u64);
            inv.push(g.colour[self.lab[p] as usize]);
            inv.push(sig.len() as u64);
            inv.extend(sig.iter().map(|&(c, m)| ((c as u64) << 32) | m as u64));
            p += len;
        }
        self.invariant = Rc::new(inv);
    }

    /// First smallest non-singleton cell as `(start, len)`.
    fn target_cell(&self) -> Option<(usize, usize)> {
        let n = self.lab.len();
        let mut best: Option<(usize, usize)> = None;
        let mut p = 0;
        while p < n {
            let len = self.cell_len[p] as usize;
            if len > 1 && best.is_none_or(|(_, l)| len < l) {
                best = Some((p, len));
            }
            p += len;
        }
        best
    }

    fn individualise(&self, g: &Coloured, v: u32) -> Node {
        let mut child = self.clone();
        let start = child.cell_of[v as usize] as usize;
        let len = child.cell_len[start] as usize;
        let at = start + child.lab[start..start + len].iter().position(|&x| x == v).unwrap();
        child.lab.swap(start, at);
        child.cell_len[start] = 1;
        child.cell_len[start + 1] = (len - 1) as u32;
        for &w in &child.lab[start + 1..start + len] {
            child.cell_of[w as usize] = (start + 1) as u32;
        }
        child.refine(g);
        child
    }
}

fn sig_with(cell_of: &[u32], g: &Coloured, v: u32) -> Vec<(u32, u32)> {
    let mut sig: Vec<(u32, u32)> = g.adj[v as usize].iter().map(|&(w, m)| (cell_of[w as usize], m)).collect();
    sig.sort_unstable();
    sig
}

#[derive(Clone)]
struct Leaf {
    lab: Vec<u32>,
    path: Vec<Rc<Vec<u64>>>,
    cert: Vec<u64>,
}

impl Leaf {
    fn key_cmp(&self, other: &Leaf) -> std::cmp::Ordering {
        self.path.cmp(&other.path).then_with(|| self.cert.cmp(&other.cert))
    }

    fn same_key(&self, other: &Leaf) -> bool {
        self.key_cmp(other).is_eq()
    }
}

struct Search<'a> {
    g: &'a Coloured,
    generators: Vec<Vec<u32>>,
    order: BigUint,
}

impl<'a> Search<'a> {
    fn leaf(&self, node: &Node, path: Vec<Rc<Vec<u64>>>) -> Leaf {
        let n = node.lab.len();
        let mut pos = vec![0u32; n];
        for (p, &v) in node.lab.iter().enumerate() {
            pos[v as usize] = p as u32;
        }
        let mut cert = Vec::with_capacity(n * 5);
        for &v in &node.lab {
            cert.push(self.g.colour[v as usize]);
            let mut nb: Vec<u64> =
                self.g.adj[v as usize].iter().map(|&(w, m)| ((pos[w as usize] as u64) << 32) | m as u64).collect();
            nb.sort_unstable();
            cert.push(nb.len() as u64);
            cert.extend(nb);
        }
        Leaf { lab: node.lab.clone(), path, cert }
    }

    fn explore(&mut self, node: Node, prefix: &mut Vec<u32>, path: Vec<Rc<Vec<u64>>>, leftmost: bool) -> Leaf {
        let Some((start, len)) = node.target_cell() else {
            return self.leaf(&node, path);
        };
        let cell: Vec<u32> = node.lab[start..start + len].to_vec();
        let mut children: Vec<(u32, Node)> = cell.iter().map(|&w| (w, node.individualise(self.g, w))).collect();
        let least = children.iter().map(|(_, c)| c.invariant.clone()).min().expect("non-empty cell");
        children.retain(|(_, c)| c.invariant == least);

        let mut child_path = path;
        child_path.push(least);

        let candidates: Vec<u32> = children.iter().map(|(w, _)| *w).collect();
        let mut uf = UnionFind::new(candidates.len());
        let mut merged_upto = 0;
        let mut reps: Vec<(usize, Leaf)> = Vec::new();

        for (i, (w, child)) in children.into_iter().enumerate() {
            if i > 0 {
                merged_upto = self.merge_orbits(&mut uf, prefix, &candidates, merged_upto);
                let root = uf.find(i);
                if reps.iter().any(|(r, _)| uf.find(*r) == root) {
                    continue;
                }
                let mut matched = false;
                for (r, rep_leaf) in &reps {
                    if let Some(lab) = self.find_match(&child, prefix.len() + 1, rep_leaf) {
                        let gen = leaf_map(&rep_leaf.lab, &lab);
                        self.generators.push(gen);
                        uf.union(i, *r);
                        matched = true;
                        break;
                    }
                }
                if matched {
                    continue;
                }
            }
            prefix.push(w);
            let leaf = self.explore(child, prefix, child_path.clone(), leftmost && i == 0);
            prefix.pop();
            reps.push((i, leaf));
        }

        if leftmost {
            self.merge_orbits(&mut uf, prefix, &candidates, merged_upto);
            let root = uf.find(0);
            let orbit = (0..candidates.len()).filter(|&i| uf.find(i) == root).count();
            self.order *= orbit;
        }
        reps.into_iter().map(|(_, l)| l).min_by(|a, b| a.key_cmp(b)).expect("at least one explored child")
    }

    /// Unions candidates related by generators that fix `prefix` pointwise.
    fn merge_orbits(&self, uf: &mut UnionFind, prefix: &[u32], candidates: &[u32], from: usize) -> usize {
        for gen in &self.generators[from..] {
            if prefix.iter().any(|&v| gen[v as usize] != v) {
                continue;
            }
            for (i, &w) in candidates.iter().enumerate() {
                let image = gen[w as usize];
                if let Some(j) = candidates.iter().position(|&x| x == image) {
                    uf.union(i, j);
                }
            }
        }
        self.generators.len()
    }

    /// Depth-first search below `node` (at `depth`) for a leaf with the same key as `target`.
    fn find_match(&self, node: &Node, depth: usize, target: &Leaf) -> Option<Vec<u32>> {
        if *node.invariant != *target.path[depth] {
            return None;
        }
        match node.target_cell() {
            None => {
                if depth + 1 != target.path.len() {
                    return None;
                }
                let leaf = self.leaf(node, target.path.clone());
                leaf.same_key(target).then_some(leaf.lab)
            }
            Some((start, len)) => {
                if depth + 1 >= target.path.len() {
                    return None;
                }
                for &w in &node.lab[start..start + len] {
                    let child = node.individualise(self.g, w);
                    if let Some(found) = self.find_match(&child, depth + 1, target) {
                        return Some(found);
                    }
                }
                None
            }
        }
    }
}

/// Automorphism taking the vertex at each position of `from` to the vertex at
/// the same position of `to`.
fn leaf_map(from: &[u32], to: &[u32]) -> Vec<u32> {
    let mut gen = vec![0u32; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        gen[a as usize] = b;
    }
    gen
}

struct Analysis {
    labelling: Vec<Vertex>,
    generators: Vec<Vec<Vertex>>,
    order: BigUint,
}

fn analyse(g: &Multigraph) -> Analysis {
    let coloured = Coloured::from_multigraph(g);
    let n = coloured.len();
    if n == 0 {
        return Analysis { labelling: Vec::new(), generators: Vec::new(), order: BigUint::from(1u32) };
    }
    let root = Node::root(&coloured);
    let mut search = Search { g: &coloured, generators: Vec::new(), order: BigUint::from(1u32) };
    let root_path = vec![root.invariant.clone()];
    let best = search.explore(root, &mut Vec::new(), root_path, true);
    let mut labelling = vec![0; n];
    for (p, &v) in best.lab.iter().enumerate() {
        labelling[v as usize] = p;
    }
    let generators = search.generators.iter().map(|gen| gen.iter().map(|&x| x as usize).collect()).collect();
    Analysis { labelling, generators, order: search.order }
}

pub(super) fn automorphism_group(g: &Multigraph) -> AutomorphismGroup {
    let a = analyse(g);
    AutomorphismGroup {
        vertex_count: g.vertex_count(),
        generators: a.generators,
        order: a.order,
        canonical_labelling: a.labelling,
    }
}

pub(super) fn canonical_form(g: &Multigraph) -> Multigraph {
    let a = analyse(g);
    relabel_sorted(g, &a.labelling)
}

fn relabel_sorted(g: &Multigraph, labelling: &[Vertex]) -> Multigraph {
    let relabelled = g.relabel(labelling);
    Multigraph::from_edges_unchecked(g.vertex_count(), &relabelled.sorted_edges())
}

pub(super) fn certificate(g: &Multigraph) -> Certificate {
    let a = analyse(g);
    let canon = relabel_sorted(g, &a.labelling);
    let mut parallel_class_sizes: Vec<usize> =
        g.parallel_classes().iter().filter(|c| !c.is_loop()).map(|c| c.multiplicity()).collect();
    parallel_class_sizes.sort_unstable();
    Certificate {
        canonical_bytes: super::mel::serialize(&canon).into_bytes(),
        aut_order_vertex_level: a.order,
        loop_count: g.loop_count(),
        parallel_class_sizes,
    }
}
