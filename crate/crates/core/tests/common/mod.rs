//! Brute-force oracles shared by the integration tests. Nothing here uses the
//! library's canonical labelling, orbit machinery or enumeration.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use dualgraph::{GraphClass, Multigraph};
use proptest::prelude::*;

/// Loop counts and multiplicity matrix of a small multigraph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matrix {
    pub loops: Vec<usize>,
    pub mult: Vec<Vec<usize>>,
}

impl Matrix {
    pub fn of(g: &Multigraph) -> Matrix {
        let n = g.vertex_count();
        let mut loops = vec![0; n];
        let mut mult = vec![vec![0; n]; n];
        for (u, v) in g.edges() {
            if u == v {
                loops[u] += 1;
            } else {
                mult[u][v] += 1;
                mult[v][u] += 1;
            }
        }
        Matrix { loops, mult }
    }

    pub fn n(&self) -> usize {
        self.loops.len()
    }

    pub fn to_graph(&self) -> Multigraph {
        let n = self.n();
        let mut edges = Vec::new();
        for v in 0..n {
            edges.extend(std::iter::repeat_n((v, v), self.loops[v]));
            for w in v + 1..n {
                edges.extend(std::iter::repeat_n((v, w), self.mult[v][w]));
            }
        }
        Multigraph::with_vertices(n, &edges).unwrap()
    }

    pub fn permuted(&self, p: &[usize]) -> Matrix {
        let n = self.n();
        let mut loops = vec![0; n];
        let mut mult = vec![vec![0; n]; n];
        for v in 0..n {
            loops[p[v]] = self.loops[v];
            for w in 0..n {
                mult[p[v]][p[w]] = self.mult[v][w];
            }
        }
        Matrix { loops, mult }
    }

    pub fn connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for (w, s) in seen.iter_mut().enumerate() {
                if self.mult[v][w] > 0 && !*s {
                    *s = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn class(&self) -> GraphClass {
        if self.loops.iter().any(|&l| l > 0) {
            GraphClass::LoopsAllowed
        } else if self.mult.iter().flatten().any(|&m| m > 1) {
            GraphClass::Loopless
        } else {
            GraphClass::Simple
        }
    }

    /// Smallest relabelling over all `n!` vertex permutations.
    pub fn brute_canonical(&self) -> Matrix {
        let mut best: Option<Matrix> = None;
        for p in permutations(self.n()) {
            let m = self.permuted(&p);
            if best.as_ref().is_none_or(|b| m < *b) {
                best = Some(m);
            }
        }
        best.unwrap()
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn brute_isomorphic(a: &Multigraph, b: &Multigraph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && Matrix::of(a).brute_canonical() == Matrix::of(b).brute_canonical()
}

/// Every connected trivalent multigraph of genus `g` in `class`, one per
/// isomorphism class, found by filling multiplicity matrices.
pub fn brute_trivalent(g: usize, class: GraphClass) -> Vec<Matrix> {
    let n = 2 * g - 2;
    let mut found = BTreeSet::new();
    for loops in 0..1usize << n {
        let mut m = Matrix { loops: (0..n).map(|v| (loops >> v) & 1).collect(), mult: vec![vec![0; n]; n] };
        let mut left: Vec<usize> = m.loops.iter().map(|&l| 3 - 2 * l).collect();
        fill(&mut m, &mut left, 0, 1, &mut |m| {
            if m.connected() && class.admits(m.class()) {
                found.insert(m.brute_canonical());
            }
        });
    }
    found.into_iter().collect()
}

fn fill(m: &mut Matrix, left: &mut [usize], i: usize, j: usize, emit: &mut impl FnMut(&Matrix)) {
    let n = m.n();
    if i == n {
        if left.iter().all(|&d| d == 0) {
            emit(m);
        }
        return;
    }
    if j == n {
        if left[i] == 0 {
            fill(m, left, i + 1, i + 2, emit);
        }
        return;
    }
    for k in 0..=left[i].min(left[j]) {
        left[i] -= k;
        left[j] -= k;
        m.mult[i][j] = k;
        m.mult[j][i] = k;
        fill(m, left, i, j + 1, emit);
        left[i] += k;
        left[j] += k;
    }
    m.mult[i][j] = 0;
    m.mult[j][i] = 0;
}

/// Every connected trivalent multigraph of genus `g` in `class`, found by
/// trying all pairings of the `6g - 6` darts and bucketing the results by
/// pairwise brute-force isomorphism.
pub fn brute_pairings(g: usize, class: GraphClass) -> Vec<Multigraph> {
    fn pair(mate: &mut Vec<Option<usize>>, emit: &mut impl FnMut(&[Option<usize>])) {
        let Some(a) = mate.iter().position(Option::is_none) else {
            emit(mate);
            return;
        };
        for b in a + 1..mate.len() {
            if mate[b].is_none() {
                mate[a] = Some(b);
                mate[b] = Some(a);
                pair(mate, emit);
                mate[a] = None;
                mate[b] = None;
            }
        }
    }
    let n = 2 * g - 2;
    let mut reps: Vec<Multigraph> = Vec::new();
    pair(&mut vec![None; 3 * n], &mut |mate| {
        let edges: Vec<(usize, usize)> =
            (0..mate.len()).filter_map(|a| mate[a].filter(|&b| a < b).map(|b| (a / 3, b / 3))).collect();
        let graph = Multigraph::with_vertices(n, &edges).unwrap();
        let m = Matrix::of(&graph);
        if m.connected() && class.admits(m.class()) && !reps.iter().any(|r| brute_isomorphic(r, &graph)) {
            reps.push(graph);
        }
    });
    reps
}

/// Every connected multigraph with at most `max_edges` edges and all
/// valences in 1..=3, up to the labellings with non-increasing valences.
pub fn small_multigraphs(max_edges: usize) -> Vec<Matrix> {
    fn go(m: &mut Matrix, i: usize, j: usize, budget: usize, out: &mut Vec<Matrix>) {
        let n = m.n();
        if i == n {
            let deg: Vec<usize> = (0..n).map(|v| 2 * m.loops[v] + m.mult[v].iter().sum::<usize>()).collect();
            if deg.iter().all(|&d| (1..=3).contains(&d)) && deg.windows(2).all(|w| w[0] >= w[1]) && m.connected() {
                out.push(m.clone());
            }
            return;
        }
        if j == n {
            go(m, i + 1, i + 2, budget, out);
            return;
        }
        let room = |m: &Matrix, v: usize| 3 - (2 * m.loops[v] + m.mult[v].iter().sum::<usize>()).min(3);
        let top = budget.min(room(m, i)).min(room(m, j));
        for k in 0..=top {
            m.mult[i][j] = k;
            m.mult[j][i] = k;
            go(m, i, j + 1, budget - k, out);
        }
        m.mult[i][j] = 0;
        m.mult[j][i] = 0;
    }
    let mut out = Vec::new();
    for n in 1..=max_edges + 1 {
        for loops in 0..1usize << n {
            let l: Vec<usize> = (0..n).map(|v| (loops >> v) & 1).collect();
            let used = l.iter().sum::<usize>();
            if used > max_edges {
                continue;
            }
            let mut m = Matrix { loops: l, mult: vec![vec![0; n]; n] };
            go(&mut m, 0, 1, max_edges - used, &mut out);
        }
    }
    out
}

/// Counts permutations of the darts that commute with the mate involution
/// and carry the darts at each vertex onto the darts at one vertex.
pub fn brute_dart_automorphisms(g: &Multigraph) -> u64 {
    let n = g.vertex_count();
    let mut order = Vec::new();
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &d in g.darts_at(v) {
                order.push(d);
                let w = g.vertex_of(g.mate(d));
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut state = DartSearch {
        g,
        order,
        image: vec![usize::MAX; g.dart_count()],
        used: vec![false; g.dart_count()],
        vmap: vec![usize::MAX; n],
        vused: vec![false; n],
    };
    state.count(0)
}

struct DartSearch<'a> {
    g: &'a Multigraph,
    order: Vec<usize>,
    image: Vec<usize>,
    used: Vec<bool>,
    vmap: Vec<usize>,
    vused: Vec<bool>,
}

impl DartSearch<'_> {
    fn count(&mut self, i: usize) -> u64 {
        if i == self.order.len() {
            return 1;
        }
        let d = self.order[i];
        let v = self.g.vertex_of(d);
        let mate = self.g.mate(d);
        let candidates: Vec<usize> = if self.image[mate] != usize::MAX {
            vec![self.g.mate(self.image[mate])]
        } else if self.vmap[v] != usize::MAX {
            self.g.darts_at(self.vmap[v]).to_vec()
        } else {
            (0..self.g.dart_count()).collect()
        };
        let mut total = 0;
        for t in candidates {
            if self.used[t] {
                continue;
            }
            let w = self.g.vertex_of(t);
            let fresh = self.vmap[v] == usize::MAX;
            if fresh {
                if self.vused[w] || self.g.degree(w) != self.g.degree(v) {
                    continue;
                }
            } else if self.vmap[v] != w {
                continue;
            }
            if fresh {
                self.vmap[v] = w;
                self.vused[w] = true;
            }
            self.image[d] = t;
            self.used[t] = true;
            total += self.count(i + 1);
            self.image[d] = usize::MAX;
            self.used[t] = false;
            if fresh {
                self.vmap[v] = usize::MAX;
                self.vused[w] = false;
            }
        }
        total
    }
}

/// Fewest terms `a * 2^n` with `a` in {1, 3} summing to `g`, by iterative
/// deepening over non-increasing term sequences.
pub fn brute_l(g: u64) -> u32 {
    fn reach(g: u64, depth: u32, cap: u64, terms: &[u64]) -> bool {
        if g == 0 {
            return true;
        }
        if depth == 0 {
            return false;
        }
        terms.iter().filter(|&&t| t <= g && t <= cap).any(|&t| reach(g - t, depth - 1, t, terms))
    }
    let mut terms: Vec<u64> = (0..40).flat_map(|n| [1u64 << n, 3u64 << n]).filter(|&t| t <= g.max(1)).collect();
    terms.sort_unstable_by(|a, b| b.cmp(a));
    terms.dedup();
    (0..).find(|&d| reach(g, d, u64::MAX, &terms)).unwrap()
}

/// A random trivalent multigraph on `n` vertices from a random pairing of darts.
pub fn random_trivalent(max_vertices: usize) -> impl Strategy<Value = Multigraph> {
    (1..=max_vertices / 2)
        .prop_flat_map(|half| Just((0..6 * half).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|darts| {
            let n = darts.len() / 3;
            let edges: Vec<(usize, usize)> = darts.chunks(2).map(|p| (p[0] / 3, p[1] / 3)).collect();
            Multigraph::with_vertices(n, &edges).unwrap()
        })
        .prop_filter("connected", |g| Matrix::of(g).connected())
}

pub fn relabelling(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}
