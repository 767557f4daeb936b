use num_bigint::BigUint;
use num_rational::BigRational;
use rayon::prelude::*;

use super::{edge_orbit_representatives, enumerate_with, EnumError, EnumOptions};
use crate::multigraph::{GraphClass, Multigraph};
use crate::numeric;
use crate::transforms;

#[derive(Debug, Clone)]
pub struct Mu1Witness {
    pub graph: Multigraph,
    pub edge: usize,
    pub pinched_order: BigUint,
}

#[derive(Debug, Clone)]
pub struct ExtremeReport {
    pub genus: u64,
    pub graph_class: GraphClass,
    /// `2^(g + h(g))`.
    pub normaliser: BigUint,
    pub max_aut: BigUint,
    pub mu: BigRational,
    pub max_pinched: BigUint,
    pub mu1: BigRational,
    pub optimal: Vec<Multigraph>,
    /// One edge per orbit attaining the maximum pinched order.
    pub mu1_witnesses: Vec<Mu1Witness>,
    pub strictly_optimal: Vec<Multigraph>,
}

fn double_edges(g: &Multigraph) -> usize {
    g.parallel_classes().iter().filter(|c| !c.is_loop() && c.multiplicity() == 2).count()
}

/// μ, μ_1 and the optimal graphs of a class at genus `g`. Loop edges are
/// not pinched.
pub fn extremes(g: u64, class: GraphClass, opts: &EnumOptions) -> Result<ExtremeReport, EnumError> {
    let result = enumerate_with(g, class, opts)?;
    let normaliser = numeric::smooth_normaliser(g);
    let max_aut = result.max_aut().cloned().unwrap_or_default();
    let optimal: Vec<Multigraph> =
        result.representatives.iter().filter(|r| r.aut_order == max_aut).map(|r| r.graph.clone()).collect();

    let pinched: Vec<Vec<Mu1Witness>> = super::with_pool(opts.jobs, || {
        Ok(result
            .representatives
            .par_iter()
            .map(|r| {
                edge_orbit_representatives(&r.graph)
                    .into_iter()
                    .filter(|&e| {
                        let (u, v) = r.graph.edge(e);
                        u != v
                    })
                    .map(|e| Mu1Witness {
                        graph: r.graph.clone(),
                        edge: e,
                        pinched_order: transforms::pinched_aut_order(&r.graph, e).expect("non-loop edge"),
                    })
                    .collect()
            })
            .collect())
    })?;
    let max_pinched = pinched.iter().flatten().map(|w| w.pinched_order.clone()).max().unwrap_or_default();
    let mu1_witnesses: Vec<Mu1Witness> =
        pinched.into_iter().flatten().filter(|w| w.pinched_order == max_pinched).collect();

    let keys: Vec<(usize, usize)> = optimal.iter().map(|g| (g.well_chosen_orbit().size, double_edges(g))).collect();
    let best = keys.iter().min().copied();
    let strictly_optimal =
        optimal.iter().zip(&keys).filter(|(_, k)| Some(**k) == best).map(|(g, _)| g.clone()).collect();

    let ratio = |x: &BigUint| numeric::smooth_ratio(x, g);
    Ok(ExtremeReport {
        genus: g,
        graph_class: class,
        mu: ratio(&max_aut),
        mu1: ratio(&max_pinched),
        normaliser,
        max_aut,
        max_pinched,
        optimal,
        mu1_witnesses,
        strictly_optimal,
    })
}

#[derive(Debug, Clone)]
pub struct Part1Optimum {
    pub genus: u64,
    pub max_aut: BigUint,
    pub witnesses: Vec<Multigraph>,
}

/// Largest automorphism order over the loops-allowed class.
pub fn optimal_part1(g: u64, opts: &EnumOptions) -> Result<Part1Optimum, EnumError> {
    let result = enumerate_with(g, GraphClass::LoopsAllowed, opts)?;
    let max_aut = result.max_aut().cloned().unwrap_or_default();
    let witnesses = result.representatives.iter().filter(|r| r.aut_order == max_aut).map(|r| r.graph.clone()).collect();
    Ok(Part1Optimum { genus: g, max_aut, witnesses })
}
