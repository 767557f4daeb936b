//! Constructors for the candidate graph families and their closed-form
//! automorphism orders.

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::multigraph::{Multigraph, Vertex};
use crate::numeric::{self, CaseTag, Part};
use crate::transforms::{self, Expansion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    T,
    C,
    Cprime,
    Cdprime,
    D,
    Cone,
    Star,
    Pseudocycle,
    BinaryTree,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::T => "T",
            Family::C => "C",
            Family::Cprime => "Cp",
            Family::Cdprime => "Cpp",
            Family::D => "D",
            Family::Cone => "cone",
            Family::Star => "star",
            Family::Pseudocycle => "pseudocycle",
            Family::BinaryTree => "binary_tree",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "T" => Family::T,
            "C" => Family::C,
            "Cp" | "Cprime" | "C'" => Family::Cprime,
            "Cpp" | "Cdprime" | "C''" => Family::Cdprime,
            "D" => Family::D,
            "cone" => Family::Cone,
            "star" => Family::Star,
            "pseudocycle" => Family::Pseudocycle,
            "binary_tree" | "binary-tree" => Family::BinaryTree,
            other => return Err(format!("unknown family `{other}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("parameter {parameter} is outside the range of family {family}")]
    OutOfRange { family: Family, parameter: u64 },
    #[error("genus {g} matches several construction cases: {cases:?}")]
    Overlap { g: u64, cases: Vec<&'static str> },
    #[error("{family} construction for {parameter} produced genus {genus}")]
    WrongGenus { family: Family, parameter: u64, genus: i64 },
    #[error("pseudocycle piece must have exactly two vertices of valence 2")]
    BadPiece,
}

/// How the construction of `T_n` finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LastStep {
    EdgeJoin,
    StarJoin,
    None,
}

#[derive(Debug, Clone)]
pub struct CandidateFamily {
    pub family: Family,
    pub parameter: u64,
    pub graph: Multigraph,
    pub expected_aut: Option<BigUint>,
    pub last_step: LastStep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LastJoin {
    Edge(Vertex, Vertex),
    Star { center: Vertex, arms: [Vertex; 3] },
}

struct Tree {
    leaves: Vec<Vertex>,
    last: LastJoin,
}

#[derive(Default)]
struct Builder {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl Builder {
    fn vertex(&mut self) -> Vertex {
        self.n += 1;
        self.n - 1
    }

    fn edge(&mut self, u: Vertex, v: Vertex) -> usize {
        self.edges.push((u, v));
        self.edges.len() - 1
    }

    /// Rooted binary tree with `leaves` (a power of two) leaves; returns the root and leaves.
    fn binary_tree(&mut self, leaves: u64) -> (Vertex, Vec<Vertex>) {
        let root = self.vertex();
        if leaves <= 1 {
            return (root, vec![root]);
        }
        let (a, mut la) = self.binary_tree(leaves / 2);
        let (b, lb) = self.binary_tree(leaves / 2);
        self.edge(root, a);
        self.edge(root, b);
        la.extend(lb);
        (root, la)
    }

    fn tree_t(&mut self, n: u64) -> Tree {
        let leaves: Vec<Vertex> = (0..n).map(|_| self.vertex()).collect();
        let mut level = leaves.clone();
        let mut straggler: Option<Vertex> = None;
        loop {
            let mut active = level.clone();
            active.extend(straggler);
            if active.len() == 2 {
                self.edge(active[0], active[1]);
                return Tree { leaves, last: LastJoin::Edge(active[0], active[1]) };
            }
            if active.len() == 3 {
                let c = self.vertex();
                for &a in &active {
                    self.edge(c, a);
                }
                return Tree { leaves, last: LastJoin::Star { center: c, arms: [active[0], active[1], active[2]] } };
            }
            let mut next = Vec::new();
            for pair in level.chunks_exact(2) {
                let v = self.vertex();
                self.edge(v, pair[0]);
                self.edge(v, pair[1]);
                next.push(v);
            }
            if level.len() % 2 == 1 {
                let odd = *level.last().unwrap();
                match straggler.take() {
                    Some(s) => {
                        let v = self.vertex();
                        self.edge(v, odd);
                        self.edge(v, s);
                        next.push(v);
                    }
                    None => straggler = Some(odd),
                }
            }
            level = next;
        }
    }

    fn loop_at(&mut self, v: Vertex) {
        self.edge(v, v);
    }

    fn cone_at(&mut self, v: Vertex) {
        let (a, b) = (self.vertex(), self.vertex());
        self.edge(a, b);
        self.edge(a, b);
        self.edge(v, a);
        self.edge(v, b);
    }

    fn decorate(&mut self, leaves: &[Vertex], tail: Tail) {
        for &l in leaves {
            match tail {
                Tail::Loop => self.loop_at(l),
                Tail::Cone => self.cone_at(l),
            }
        }
    }

    fn finish(self) -> Multigraph {
        Multigraph::from_edges_unchecked(self.n, &self.edges)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tail {
    Loop,
    Cone,
}

fn check_genus(family: Family, parameter: u64, g: &Multigraph) -> Result<(), FamilyError> {
    if g.genus() != parameter as i64 {
        return Err(FamilyError::WrongGenus { family, parameter, genus: g.genus() });
    }
    Ok(())
}

fn two_pow(e: u32) -> u64 {
    1u64 << e
}

/// `(m, p)` with `m > p` when `n = 2^m + 2^p`.
fn two_bits(n: u64) -> Option<(u32, u32)> {
    (n.count_ones() == 2).then(|| (63 - n.leading_zeros(), n.trailing_zeros()))
}

fn three_pow(n: u64) -> Option<u32> {
    (n > 0 && n.is_multiple_of(3) && (n / 3).is_power_of_two()).then(|| (n / 3).trailing_zeros())
}

/// The tree `T_n`, leaves first in row order.
pub fn tree_t(n: u64) -> Result<CandidateFamily, FamilyError> {
    if n < 2 {
        return Err(FamilyError::OutOfRange { family: Family::T, parameter: n });
    }
    let mut b = Builder::default();
    let tree = b.tree_t(n);
    let last_step = match tree.last {
        LastJoin::Edge(..) => LastStep::EdgeJoin,
        LastJoin::Star { .. } => LastStep::StarJoin,
    };
    Ok(CandidateFamily {
        family: Family::T,
        parameter: n,
        graph: b.finish(),
        expected_aut: Some(expected_tree_aut(n)),
        last_step,
    })
}

/// `2^k(n)`, times 3 when `n = 3 * 2^m`.
pub fn expected_tree_aut(n: u64) -> BigUint {
    let base = BigUint::from(1u32) << numeric::k(n) as usize;
    if three_pow(n).is_some() {
        base * 3u32
    } else {
        base
    }
}

/// Centre of a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TreeRoot {
    Vertex(Vertex),
    Edge(Vertex, Vertex),
}

/// The vertex or edge lying on every longest path of a tree.
pub fn tree_root(t: &Multigraph) -> Result<TreeRoot, FamilyError> {
    let n = t.vertex_count();
    let not_tree = FamilyError::OutOfRange { family: Family::T, parameter: n as u64 };
    if !t.is_connected() || t.edge_count() + 1 != n {
        return Err(not_tree);
    }
    if n == 1 {
        return Ok(TreeRoot::Vertex(0));
    }
    let mut degree = t.degrees();
    let mut alive = n;
    let mut layer: Vec<Vertex> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut removed = vec![false; n];
    while alive > 2 {
        let mut next = Vec::new();
        for &v in &layer {
            removed[v] = true;
            alive -= 1;
            for w in t.neighbors(v) {
                if !removed[w] {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    let rest: Vec<Vertex> = (0..n).filter(|&v| !removed[v]).collect();
    Ok(match rest.as_slice() {
        [v] => TreeRoot::Vertex(*v),
        [u, v] => TreeRoot::Edge(*u, *v),
        _ => unreachable!("leaf stripping leaves one or two vertices"),
    })
}

/// Canonical string of the subtree rooted at `v` away from `parent`.
fn rooted_code(g: &Multigraph, v: Vertex, parent: Vertex) -> String {
    let mut kids: Vec<String> = g.neighbors(v).filter(|&w| w != parent).map(|w| rooted_code(g, w, v)).collect();
    kids.sort();
    format!("({})", kids.concat())
}

fn c_cases(g: u64) -> Vec<&'static str> {
    let mut cases = Vec::new();
    if let Some(m) = g.checked_sub(1).and_then(three_pow) {
        if m > 0 {
            cases.push("3·2^m+1");
        }
    }
    if g.is_multiple_of(3) {
        if let Some((m, p)) = two_bits(g / 3) {
            if m > p + 1 {
                cases.push("3(2^m+2^p)");
            }
        }
    }
    cases
}

fn build_c(b: &mut Builder, g: u64, tail: Tail) -> Result<(), FamilyError> {
    let cases = c_cases(g);
    match cases.as_slice() {
        [] => {
            let t = b.tree_t(g);
            b.decorate(&t.leaves, tail);
        }
        ["3·2^m+1"] => {
            let t = b.tree_t(g - 1);
            let LastJoin::Star { center, arms } = t.last else {
                unreachable!("T_(3·2^m) ends with a star");
            };
            // replace the star by a triangle through its arms
            b.edges.retain(|&(u, _)| u != center);
            b.edge(arms[0], arms[1]);
            b.edge(arms[1], arms[2]);
            b.edge(arms[2], arms[0]);
            let removed_center = center;
            b.decorate(&t.leaves, tail);
            // the star centre is the last vertex created by tree_t; drop it
            compact_drop(b, removed_center);
        }
        ["3(2^m+2^p)"] => {
            let (m, p) = two_bits(g / 3).unwrap();
            let s = b.vertex();
            for _ in 0..3 {
                let r = b.vertex();
                b.edge(s, r);
                let (x, lx) = b.binary_tree(two_pow(m));
                let (y, ly) = b.binary_tree(two_pow(p));
                b.edge(r, x);
                b.edge(r, y);
                b.decorate(&lx, tail);
                b.decorate(&ly, tail);
            }
        }
        _ => return Err(FamilyError::Overlap { g, cases }),
    }
    Ok(())
}

/// Removes an isolated vertex from the builder, shifting later labels down.
fn compact_drop(b: &mut Builder, v: Vertex) {
    for e in b.edges.iter_mut() {
        assert!(e.0 != v && e.1 != v);
        if e.0 > v {
            e.0 -= 1;
        }
        if e.1 > v {
            e.1 -= 1;
        }
    }
    b.n -= 1;
}

fn c_graph(g: u64, tail: Tail) -> Result<Multigraph, FamilyError> {
    let mut b = Builder::default();
    build_c(&mut b, g, tail)?;
    Ok(b.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PrimeCase {
    ThreePow { m: u32 },
    ThreePowPlusOne,
    ThreePowPlusTwo,
    ThreePowPlusOneTimesThree,
    ThreeSumPow { m: u32, p: u32 },
    ThreeSumPowPlusOne,
    Otherwise,
}

impl PrimeCase {
    fn name(self) -> &'static str {
        match self {
            PrimeCase::ThreePow { .. } => "3·2^m",
            PrimeCase::ThreePowPlusOne => "3·2^m+1",
            PrimeCase::ThreePowPlusTwo => "3·2^m+2",
            PrimeCase::ThreePowPlusOneTimesThree => "3(2^m+1)",
            PrimeCase::ThreeSumPow { .. } => "3(2^m+2^p)",
            PrimeCase::ThreeSumPowPlusOne => "3(2^m+2^p+1)",
            PrimeCase::Otherwise => "otherwise",
        }
    }
}

fn prime_cases(g: u64) -> Vec<PrimeCase> {
    let mut out = Vec::new();
    if let Some(m) = three_pow(g) {
        if m > 0 {
            out.push(PrimeCase::ThreePow { m });
        }
    }
    if let Some(m) = g.checked_sub(1).and_then(three_pow) {
        if m > 0 {
            out.push(PrimeCase::ThreePowPlusOne);
        }
    }
    if let Some(m) = g.checked_sub(2).and_then(three_pow) {
        if m > 1 {
            out.push(PrimeCase::ThreePowPlusTwo);
        }
    }
    if g.is_multiple_of(3) {
        let q = g / 3;
        if let Some(m) = q.checked_sub(1).filter(|r| r.is_power_of_two()).map(u64::trailing_zeros) {
            if m > 1 {
                out.push(PrimeCase::ThreePowPlusOneTimesThree);
            }
        }
        if let Some((m, p)) = two_bits(q) {
            if p > 0 && m > p + 1 {
                out.push(PrimeCase::ThreeSumPow { m, p });
            }
        }
        if let Some((m, p)) = q.checked_sub(1).and_then(two_bits) {
            if p > 0 && m > p + 1 {
                out.push(PrimeCase::ThreeSumPowPlusOne);
            }
        }
    }
    out
}

/// A `C'` graph together with its central star centre and the three star edges.
struct Starred {
    graph: Multigraph,
    center: Vertex,
    star_edges: [usize; 3],
}

fn starred(g: u64) -> Result<Starred, FamilyError> {
    let mut b = Builder::default();
    let s = b.vertex();
    let mut star_edges = [0; 3];
    let (m, p) = match prime_cases(g).as_slice() {
        [PrimeCase::ThreePow { m }] => (*m, None),
        [PrimeCase::ThreeSumPow { m, p }] => (*m, Some(*p)),
        _ => return Err(FamilyError::OutOfRange { family: Family::Cprime, parameter: g }),
    };
    for e in star_edges.iter_mut() {
        match p {
            None => {
                let (r, leaves) = b.binary_tree(two_pow(m - 1));
                *e = b.edge(s, r);
                b.decorate(&leaves, Tail::Cone);
            }
            Some(p) => {
                let r = b.vertex();
                *e = b.edge(s, r);
                let (x, lx) = b.binary_tree(two_pow(m - 1));
                let (y, ly) = b.binary_tree(two_pow(p - 1));
                b.edge(r, x);
                b.edge(r, y);
                b.decorate(&lx, Tail::Cone);
                b.decorate(&ly, Tail::Cone);
            }
        }
    }
    Ok(Starred { graph: b.finish(), center: s, star_edges })
}

fn with_star_doubles(base: Starred) -> Multigraph {
    let mut g = base.graph;
    for e in base.star_edges {
        g = transforms::insert_double_edge(&g, e).expect("star edges are simple");
    }
    g
}

/// The graph of the final, generic case of the `C'` definition.
fn d_graph(g: u64) -> Result<Multigraph, FamilyError> {
    if g < 4 {
        return Err(FamilyError::OutOfRange { family: Family::D, parameter: g });
    }
    if g.is_multiple_of(2) {
        if c_cases(g / 2) == ["3·2^m+1"] {
            let mut b = Builder::default();
            let t = b.tree_t(g / 2);
            b.decorate(&t.leaves, Tail::Cone);
            return Ok(b.finish());
        }
        return c_graph(g / 2, Tail::Cone);
    }
    let mut b = Builder::default();
    let t = b.tree_t(g / 2);
    let target = match t.last {
        LastJoin::Edge(..) => b.edges.len() - 1,
        LastJoin::Star { center, arms } => {
            let tree = Multigraph::from_edges_unchecked(b.n, &b.edges);
            let codes: Vec<String> = arms.iter().map(|&a| rooted_code(&tree, a, center)).collect();
            let unique: Vec<usize> =
                (0..3).filter(|&i| codes.iter().filter(|c| **c == codes[i]).count() == 1).collect();
            let pick = unique.iter().copied().min_by(|&i, &j| codes[i].cmp(&codes[j])).unwrap_or(0);
            b.edges.iter().position(|&e| e == (center, arms[pick])).unwrap()
        }
    };
    b.decorate(&t.leaves, Tail::Cone);
    let graph = b.finish();
    Ok(transforms::insert_double_edge(&graph, target).expect("tree edges are simple"))
}

fn c_prime_graph(g: u64) -> Result<Multigraph, FamilyError> {
    match g {
        2 => return Ok(transforms::cone()),
        3 => {
            let mut b = Builder::default();
            let w = b.vertex();
            b.cone_at(w);
            let (x, y) = (b.vertex(), b.vertex());
            b.edge(w, x);
            b.edge(x, y);
            b.edge(x, y);
            return Ok(b.finish());
        }
        _ => {}
    }
    let cases = prime_cases(g);
    let case = match cases.as_slice() {
        [] => PrimeCase::Otherwise,
        [c] => *c,
        _ => return Err(FamilyError::Overlap { g, cases: cases.iter().map(|c| c.name()).collect() }),
    };
    Ok(match case {
        PrimeCase::ThreePow { .. } | PrimeCase::ThreeSumPow { .. } => starred(g)?.graph,
        PrimeCase::ThreePowPlusOne => {
            let base = starred(g - 1)?;
            transforms::expand_vertex(&base.graph, base.center, Expansion::Triangle).expect("trivalent centre")
        }
        PrimeCase::ThreePowPlusTwo => {
            let base = starred(g - 2)?;
            transforms::expand_vertex(&base.graph, base.center, Expansion::K23).expect("trivalent centre")
        }
        PrimeCase::ThreePowPlusOneTimesThree | PrimeCase::ThreeSumPowPlusOne => with_star_doubles(starred(g - 3)?),
        PrimeCase::Otherwise => d_graph(g)?,
    })
}

/// `2(g-1)`-gon with every other edge doubled.
fn c_double_prime_graph(g: u64) -> Multigraph {
    let n = 2 * (g as usize - 1);
    let mut edges = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        edges.push((i, j));
        if i % 2 == 0 {
            edges.push((i, j));
        }
    }
    Multigraph::from_edges_unchecked(n, &edges)
}

/// Closed-form automorphism order of a family member, when one is known.
pub fn expected_aut(family: Family, g: u64) -> Result<Option<BigUint>, FamilyError> {
    let out_of_range = || FamilyError::OutOfRange { family, parameter: g };
    Ok(match family {
        Family::T if g >= 2 => Some(expected_tree_aut(g)),
        Family::C if g >= 3 => Some(numeric::classify_and_bound(g, Part::Nodal).map_err(|_| out_of_range())?.value),
        Family::Cprime if g >= 4 => Some(prime_order(g)?),
        Family::Cprime if g >= 2 => None,
        Family::Cdprime if g >= 3 => Some((BigUint::from(1u32) << g as usize) * (g - 1)),
        Family::D if g >= 4 => prime_cases(g).is_empty().then(|| numeric::smooth_normaliser(g)),
        Family::BinaryTree if g.is_power_of_two() => {
            Some(if g == 1 { BigUint::from(1u32) } else { BigUint::from(1u32) << (g as usize - 1) })
        }
        Family::Cone => Some(BigUint::from(4u32)),
        Family::Star => Some(BigUint::from(6u32)),
        _ => return Err(out_of_range()),
    })
}

/// Closed-form order of `C_g'`: a factor 3, 3/2 or 1 times `2^(g + h(g))`.
fn prime_order(g: u64) -> Result<BigUint, FamilyError> {
    let cases = prime_cases(g);
    let base = numeric::smooth_normaliser(g);
    Ok(match cases.as_slice() {
        [] | [PrimeCase::Otherwise] => base,
        [PrimeCase::ThreePow { .. }] | [PrimeCase::ThreePowPlusOneTimesThree] => base * 3u32,
        [_] => base * 3u32 / 2u32,
        _ => return Err(FamilyError::Overlap { g, cases: cases.iter().map(|c| c.name()).collect() }),
    })
}

/// The case of the `C'` definition that builds genus `g`.
pub fn c_prime_case(g: u64) -> &'static str {
    match prime_cases(g).as_slice() {
        [] => "otherwise",
        [c] => c.name(),
        _ => "overlap",
    }
}

/// The case tag of the `C` definition for genus `g`.
pub fn c_case(g: u64) -> Option<CaseTag> {
    numeric::classify_and_bound(g, Part::Nodal).ok().map(|r| r.case_tag)
}

pub fn candidate(family: Family, g: u64) -> Result<CandidateFamily, FamilyError> {
    let graph = match family {
        Family::T => return tree_t(g),
        Family::C if g >= 3 => c_graph(g, Tail::Loop)?,
        Family::Cprime if g >= 2 => c_prime_graph(g)?,
        Family::Cdprime if g >= 3 => c_double_prime_graph(g),
        Family::D if g >= 4 => d_graph(g)?,
        Family::Cone => transforms::cone(),
        Family::Star => star(),
        Family::BinaryTree => binary_tree(g)?,
        Family::Pseudocycle => pseudocycle(&double_edge_piece(), g as usize)?.0,
        _ => return Err(FamilyError::OutOfRange { family, parameter: g }),
    };
    if matches!(family, Family::C | Family::Cprime | Family::Cdprime | Family::D) {
        check_genus(family, g, &graph)?;
    }
    let expected_aut = match family {
        Family::Pseudocycle => Some((BigUint::from(1u32) << g as usize) * (2 * g)),
        _ => expected_aut(family, g)?,
    };
    Ok(CandidateFamily { family, parameter: g, graph, expected_aut, last_step: LastStep::None })
}

/// `K_{1,3}` with centre 0.
pub fn star() -> Multigraph {
    Multigraph::from_edges_unchecked(4, &[(0, 1), (0, 2), (0, 3)])
}

/// Rooted binary tree with `leaves` leaves; vertex 0 is the root.
pub fn binary_tree(leaves: u64) -> Result<Multigraph, FamilyError> {
    if leaves < 2 || !leaves.is_power_of_two() {
        return Err(FamilyError::OutOfRange { family: Family::BinaryTree, parameter: leaves });
    }
    let mut b = Builder::default();
    b.binary_tree(leaves);
    Ok(b.finish())
}

/// A double edge whose two ends are the attachment vertices.
pub fn double_edge_piece() -> Multigraph {
    Multigraph::from_edges_unchecked(2, &[(0, 1), (0, 1)])
}

/// Copies of `piece` in a cycle, the second attachment vertex of each copy
/// joined to the first attachment vertex of the next. Returns the graph and
/// the cycle edges.
pub fn pseudocycle(piece: &Multigraph, len: usize) -> Result<(Multigraph, Vec<usize>), FamilyError> {
    let ports: Vec<Vertex> = (0..piece.vertex_count()).filter(|&v| piece.degree(v) == 2).collect();
    let [a, z] = ports.as_slice() else {
        return Err(FamilyError::BadPiece);
    };
    if len == 0 || (0..piece.vertex_count()).any(|v| piece.degree(v) != 2 && piece.degree(v) != 3) {
        return Err(FamilyError::BadPiece);
    }
    let k = piece.vertex_count();
    let mut edges = Vec::new();
    for i in 0..len {
        edges.extend(piece.edges().map(|(u, v)| (u + i * k, v + i * k)));
    }
    let mut links = Vec::new();
    for i in 0..len {
        links.push(edges.len());
        edges.push((z + i * k, a + ((i + 1) % len) * k));
    }
    Ok((Multigraph::from_edges_unchecked(k * len, &edges), links))
}
