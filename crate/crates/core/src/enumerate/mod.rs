//! Exhaustive generation of connected trivalent multigraphs of a given genus
//! up to isomorphism.
//!
//! Each genus is grown from smaller ones by a few augmentations, and children
//! are deduplicated by canonical form:
//!
//! * edge insertion: subdivide two edges (or one edge twice) and join the new
//!   vertices, genus `g - 1 -> g`;
//! * loop hanging: subdivide an edge and hang a pendant loop, `g - 1 -> g`
//!   (loops-allowed class only);
//! * cone hanging: subdivide an edge and hang a pendant cone, `g - 2 -> g`
//!   (loopless class only).
//!
//! Simple graphs of genus `g` are the simple children of loopless graphs of
//! genus `g - 1` under insertions between distinct edges.
//!
//! Work is split by parent graph; results do not depend on the number of
//! workers.

pub mod checkpoint;
mod extremes;

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::multigraph::{parse_mel_stream, GraphClass, MelError, Multigraph, ParseMode, UnionFind, Vertex};
use checkpoint::{companion_path, parse_checkpoint, Checkpoint, CheckpointError, PrefixId};

pub use extremes::{extremes, optimal_part1, ExtremeReport, Mu1Witness, Part1Optimum};

/// Largest genus enumerated per class unless overridden.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub loops: u64,
    pub loopless: u64,
    pub simple: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { loops: 7, loopless: 8, simple: 9 }
    }
}

impl Caps {
    pub fn cap(&self, class: GraphClass) -> u64 {
        match class {
            GraphClass::LoopsAllowed => self.loops,
            GraphClass::Loopless => self.loopless,
            GraphClass::Simple => self.simple,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct EnumOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Progress file for the top genus; resumed when it exists.
    pub checkpoint: Option<PathBuf>,
    pub override_cap: bool,
    pub caps: Caps,
    /// Stop after this many checkpointed batches of parents.
    pub batch_limit: Option<usize>,
}

#[derive(Debug, Error)]
pub enum EnumError {
    #[error("genus {0} is below 2")]
    GenusTooSmall(u64),
    #[error("genus {genus} exceeds the {class} cap of {cap}; pass the override flag to proceed")]
    CapExceeded { genus: u64, class: GraphClass, cap: u64 },
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
    #[error("checkpoint companion: {0}")]
    Mel(#[from] MelError),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error("stopped after {done} of {total} parents; rerun with the same checkpoint to resume")]
    Interrupted { done: usize, total: usize },
}

#[derive(Debug, Clone)]
pub struct Representative {
    /// Canonically labelled.
    pub graph: Multigraph,
    pub aut_order: BigUint,
}

#[derive(Debug, Clone)]
pub struct EnumerationResult {
    pub genus: u64,
    pub graph_class: GraphClass,
    /// Sorted by canonical MEL bytes.
    pub representatives: Vec<Representative>,
    pub aut_histogram: BTreeMap<BigUint, usize>,
}

impl EnumerationResult {
    pub fn total(&self) -> usize {
        self.representatives.len()
    }

    pub fn max_aut(&self) -> Option<&BigUint> {
        self.aut_histogram.keys().next_back()
    }

    /// MEL stream with a `# aut=<order> class=<class>` line before each record.
    pub fn to_mel_stream(&self) -> String {
        self.representatives.iter().map(|r| mel_record(&r.graph, &r.aut_order, self.graph_class)).collect()
    }
}

fn mel_record(g: &Multigraph, aut: &BigUint, class: GraphClass) -> String {
    format!("# aut={aut} class={class}\n{}", g.to_mel())
}

pub fn enumerate(g: u64, class: GraphClass) -> Result<EnumerationResult, EnumError> {
    enumerate_with(g, class, &EnumOptions::default())
}

pub fn enumerate_with(g: u64, class: GraphClass, opts: &EnumOptions) -> Result<EnumerationResult, EnumError> {
    check_cap(g, class, opts)?;
    with_pool(opts.jobs, || {
        let reps = level(g, class, opts.checkpoint.as_deref(), opts.batch_limit)?;
        let representatives: Vec<Representative> = reps
            .par_iter()
            .map(|graph| Representative { aut_order: graph.aut_order(), graph: graph.clone() })
            .collect();
        let mut aut_histogram = BTreeMap::new();
        for r in &representatives {
            *aut_histogram.entry(r.aut_order.clone()).or_insert(0) += 1;
        }
        Ok(EnumerationResult { genus: g, graph_class: class, representatives, aut_histogram })
    })
}

pub(crate) fn check_cap(g: u64, class: GraphClass, opts: &EnumOptions) -> Result<(), EnumError> {
    if g < 2 {
        return Err(EnumError::GenusTooSmall(g));
    }
    let cap = opts.caps.cap(class);
    if g > cap && !opts.override_cap {
        return Err(EnumError::CapExceeded { genus: g, class, cap });
    }
    Ok(())
}

pub(crate) fn with_pool<T: Send>(
    jobs: Option<usize>,
    f: impl FnOnce() -> Result<T, EnumError> + Send,
) -> Result<T, EnumError> {
    match jobs {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| EnumError::ThreadPool(e.to_string()))?
            .install(f),
    }
}

type Level = Arc<Vec<Multigraph>>;

fn cache() -> &'static Mutex<HashMap<(GraphClass, u64), Level>> {
    static CACHE: OnceLock<Mutex<HashMap<(GraphClass, u64), Level>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Forgets every genus enumerated so far in this process.
pub fn clear_cache() {
    cache().lock().unwrap().clear();
}

fn key(g: &Multigraph) -> (Vec<u8>, Multigraph) {
    let c = g.canonical_form();
    (c.to_mel().into_bytes(), c)
}

fn sorted_canonical(graphs: &[Multigraph]) -> Vec<Multigraph> {
    graphs.iter().map(key).collect::<BTreeMap<_, _>>().into_values().collect()
}

fn base(g: u64, class: GraphClass) -> Option<Vec<Multigraph>> {
    let theta = Multigraph::from_edges_unchecked(2, &[(0, 1), (0, 1), (0, 1)]);
    let dumbbell = Multigraph::from_edges_unchecked(2, &[(0, 0), (0, 1), (1, 1)]);
    match (class, g) {
        (GraphClass::LoopsAllowed, 2) => Some(sorted_canonical(&[theta, dumbbell])),
        (GraphClass::Loopless, 2) => Some(sorted_canonical(&[theta])),
        (GraphClass::Simple, 2) => Some(Vec::new()),
        _ => None,
    }
}

/// Canonical representatives of genus `g`, sorted by canonical bytes. A
/// batch-limited run always does its own work.
fn level(g: u64, class: GraphClass, checkpoint: Option<&Path>, batch_limit: Option<usize>) -> Result<Level, EnumError> {
    if batch_limit.is_none() {
        if let Some(hit) = cache().lock().unwrap().get(&(class, g)) {
            return Ok(hit.clone());
        }
    }
    let reps = match base(g, class) {
        Some(b) => b,
        None => grow(g, class, checkpoint, batch_limit)?,
    };
    let reps = Arc::new(reps);
    cache().lock().unwrap().insert((class, g), reps.clone());
    Ok(reps)
}

/// Parents feeding genus `g`: each with the genus it lives in.
fn units(g: u64, class: GraphClass) -> Result<Vec<(PrefixId, Multigraph)>, EnumError> {
    let mut out = Vec::new();
    let parent_class = if class == GraphClass::Simple { GraphClass::Loopless } else { class };
    let mut push = |genus: u64| -> Result<(), EnumError> {
        for (index, p) in level(genus, parent_class, None, None)?.iter().enumerate() {
            out.push((PrefixId { genus, index }, p.clone()));
        }
        Ok(())
    };
    push(g - 1)?;
    if class == GraphClass::Loopless && g >= 4 {
        push(g - 2)?;
    }
    Ok(out)
}

fn grow(
    g: u64,
    class: GraphClass,
    checkpoint: Option<&Path>,
    batch_limit: Option<usize>,
) -> Result<Vec<Multigraph>, EnumError> {
    let units = units(g, class)?;
    let mut found: BTreeMap<Vec<u8>, Multigraph> = BTreeMap::new();
    let mut state = Checkpoint::new(g, class);
    if let Some(path) = checkpoint {
        if path.exists() {
            state = parse_checkpoint(&read(path)?)?;
            state.expect(g, class)?;
            let companion = companion_path(path);
            if companion.exists() {
                for (_, graph) in parse_mel_stream(&read(&companion)?, ParseMode::Trivalent)? {
                    let (k, c) = key(&graph);
                    found.insert(k, c);
                }
            }
        }
    }
    let pending: Vec<&(PrefixId, Multigraph)> = units.iter().filter(|(id, _)| !state.done.contains(id)).collect();
    let chunk = if checkpoint.is_some() { (rayon::current_num_threads() * 8).max(16) } else { pending.len().max(1) };
    for (i, batch) in pending.chunks(chunk).enumerate() {
        if batch_limit.is_some_and(|limit| i >= limit) {
            return Err(EnumError::Interrupted { done: state.done.len(), total: units.len() });
        }
        let parts: Vec<BTreeMap<Vec<u8>, Multigraph>> =
            batch.par_iter().map(|(id, parent)| children(parent, g - id.genus, class)).collect();
        for part in parts {
            found.extend(part);
        }
        if let Some(path) = checkpoint {
            state.done.extend(batch.iter().map(|(id, _)| *id));
            save(path, &state, &found, class)?;
        }
    }
    Ok(found.into_values().collect())
}

fn read(path: &Path) -> Result<String, EnumError> {
    fs::read_to_string(path).map_err(|e| EnumError::Io { path: path.to_owned(), message: e.to_string() })
}

fn write_atomic(path: &Path, text: &str) -> Result<(), EnumError> {
    let io = |e: std::io::Error| EnumError::Io { path: path.to_owned(), message: e.to_string() };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, text).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn save(
    path: &Path,
    state: &Checkpoint,
    found: &BTreeMap<Vec<u8>, Multigraph>,
    class: GraphClass,
) -> Result<(), EnumError> {
    let mel: String = found.values().map(|g| format!("# class={class}\n{}", g.to_mel())).collect();
    write_atomic(&companion_path(path), &mel)?;
    write_atomic(path, &state.to_text())
}

/// One edge per orbit of the automorphism group on edges.
pub(crate) fn edge_orbit_representatives(g: &Multigraph) -> Vec<usize> {
    let group = g.automorphism_group();
    let mut first: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    let mut uf = UnionFind::new(g.edge_count());
    for (i, (u, v)) in g.edges().enumerate() {
        let j = *first.entry((u.min(v), u.max(v))).or_insert(i);
        uf.union(i, j);
    }
    for gen in group.generators() {
        for (i, (u, v)) in g.edges().enumerate() {
            let (a, b) = (gen[u], gen[v]);
            uf.union(i, first[&(a.min(b), a.max(b))]);
        }
    }
    let mut reps: Vec<usize> = uf.classes().into_iter().map(|c| c.into_iter().min().unwrap()).collect();
    reps.sort_unstable();
    reps
}

/// Subdivides edge `e` of an edge list with vertex `x`.
fn subdivide(edges: &mut Vec<(Vertex, Vertex)>, e: usize, x: Vertex) {
    let (a, b) = edges[e];
    edges[e] = (a, x);
    edges.push((x, b));
}

fn insert_edge(p: &Multigraph, e1: usize, e2: usize) -> Multigraph {
    let n = p.vertex_count();
    let mut edges = p.edge_list();
    let (x, y) = (n, n + 1);
    subdivide(&mut edges, e1, x);
    if e1 == e2 {
        // edges[e1] is now (a, x); the tail (x, b) was pushed last
        let last = edges.len() - 1;
        subdivide(&mut edges, last, y);
    } else {
        subdivide(&mut edges, e2, y);
    }
    edges.push((x, y));
    Multigraph::from_edges_unchecked(n + 2, &edges)
}

fn hang_loop(p: &Multigraph, e: usize) -> Multigraph {
    let n = p.vertex_count();
    let mut edges = p.edge_list();
    subdivide(&mut edges, e, n);
    edges.extend([(n, n + 1), (n + 1, n + 1)]);
    Multigraph::from_edges_unchecked(n + 2, &edges)
}

fn hang_cone(p: &Multigraph, e: usize) -> Multigraph {
    let n = p.vertex_count();
    let mut edges = p.edge_list();
    subdivide(&mut edges, e, n);
    let (w, y, z) = (n + 1, n + 2, n + 3);
    edges.extend([(n, w), (w, y), (w, z), (y, z), (y, z)]);
    Multigraph::from_edges_unchecked(n + 4, &edges)
}

/// Canonical children of `parent` that gain `step` genus.
fn children(parent: &Multigraph, step: u64, class: GraphClass) -> BTreeMap<Vec<u8>, Multigraph> {
    let reps = edge_orbit_representatives(parent);
    let mut out = BTreeMap::new();
    let mut add = |child: Multigraph| {
        if class.admits(child.graph_class()) {
            let (k, c) = key(&child);
            out.entry(k).or_insert(c);
        }
    };
    if step == 2 {
        for &e in &reps {
            add(hang_cone(parent, e));
        }
        return out;
    }
    for &e1 in &reps {
        for e2 in 0..parent.edge_count() {
            if class == GraphClass::Simple && e1 == e2 {
                continue;
            }
            add(insert_edge(parent, e1, e2));
        }
        if class == GraphClass::LoopsAllowed {
            add(hang_loop(parent, e1));
        }
    }
    out
}
