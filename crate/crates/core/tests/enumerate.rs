use std::collections::BTreeSet;
use std::fs;

use dualgraph::enumerate::checkpoint::{companion_path, parse_checkpoint};
use dualgraph::enumerate::{self, clear_cache, enumerate, enumerate_with, extremes, EnumError, EnumOptions};
use dualgraph::multigraph::{parse_mel, parse_mel_stream, OrbitShape, ParseMode};
use dualgraph::numeric::{self, Part};
use dualgraph::{GraphClass, Multigraph};
use num_bigint::BigUint;
use num_rational::BigRational;

fn counts(class: GraphClass, genera: std::ops::RangeInclusive<u64>) -> Vec<usize> {
    genera.map(|g| enumerate(g, class).unwrap().total()).collect()
}

#[test]
fn known_counts() {
    assert_eq!(counts(GraphClass::LoopsAllowed, 2..=6), [2, 5, 17, 71, 388]);
    assert_eq!(counts(GraphClass::Loopless, 2..=7), [1, 2, 6, 20, 91, 509]);
    assert_eq!(counts(GraphClass::Simple, 3..=8), [1, 2, 5, 19, 85, 509]);
    assert_eq!(enumerate(2, GraphClass::Simple).unwrap().total(), 0);
}

#[test]
fn representatives_are_well_formed() {
    for class in [GraphClass::LoopsAllowed, GraphClass::Loopless, GraphClass::Simple] {
        for g in 2..=5 {
            let result = enumerate(g, class).unwrap();
            let mut seen = BTreeSet::new();
            let mut histogram = 0;
            for r in &result.representatives {
                let graph = &r.graph;
                assert!(graph.is_trivalent() && graph.is_connected());
                assert_eq!(graph.genus(), g as i64);
                assert!(class.admits(graph.graph_class()));
                assert_eq!(r.aut_order, graph.aut_order());
                assert!(seen.insert(graph.to_canonical_mel()), "duplicate at g={g} {class}");
                histogram += 1;
            }
            assert_eq!(result.aut_histogram.values().sum::<usize>(), histogram);
        }
    }
}

#[test]
fn mel_round_trip_of_small_graphs() {
    for g in 2..=5 {
        let result = enumerate(g, GraphClass::LoopsAllowed).unwrap();
        for r in &result.representatives {
            let back = parse_mel(&r.graph.to_mel(), ParseMode::Trivalent).unwrap();
            assert_eq!(back.edge_list(), r.graph.edge_list());
            assert_eq!(back.to_canonical_mel(), r.graph.to_canonical_mel());
        }
        let stream = parse_mel_stream(&result.to_mel_stream(), ParseMode::Trivalent).unwrap();
        assert_eq!(stream.len(), result.total());
        for ((header, graph), r) in stream.iter().zip(&result.representatives) {
            assert!(header.iter().any(|h| h.contains(&format!("aut={}", r.aut_order))));
            assert_eq!(graph.edge_list(), r.graph.edge_list());
        }
    }
}

#[test]
fn simple_maxima() {
    let max = |g| enumerate(g, GraphClass::Simple).unwrap().max_aut().cloned().unwrap();
    assert_eq!(max(3), BigUint::from(24u32));
    assert_eq!(max(4), BigUint::from(72u32));
    assert_eq!(max(5), BigUint::from(48u32));
    assert_eq!(max(6), BigUint::from(120u32));
}

#[test]
fn loops_maxima_meet_nodal_bound() {
    for g in 3..=6 {
        let bound = numeric::classify_and_bound(g, Part::Nodal).unwrap().value;
        let result = enumerate(g, GraphClass::LoopsAllowed).unwrap();
        assert_eq!(result.max_aut(), Some(&bound), "g={g}");
    }
}

#[test]
fn loopless_extremes() {
    let opts = EnumOptions::default();
    let want_mu = [(3, 1), (3, 1), (9, 4), (2, 1), (3, 1), (3, 1)];
    for (g, (n, d)) in (2..=7).zip(want_mu) {
        let r = extremes(g, GraphClass::Loopless, &opts).unwrap();
        assert_eq!(r.mu, BigRational::new(n.into(), d.into()), "g={g}");
        assert_eq!(r.mu1, BigRational::from_integer(1.into()), "g={g}");
        assert_eq!(r.max_pinched, r.normaliser, "g={g}");
        assert!(!r.mu1_witnesses.is_empty());
        for w in &r.mu1_witnesses {
            assert_eq!(dualgraph::transforms::pinched_aut_order(&w.graph, w.edge).unwrap(), r.max_pinched);
        }
    }
}

fn double_edges(g: &Multigraph) -> usize {
    g.parallel_classes().iter().filter(|c| !c.is_loop() && c.multiplicity() == 2).count()
}

#[test]
fn strictly_optimal_graphs() {
    let opts = EnumOptions::default();
    for g in 4..=8 {
        let r = extremes(g, GraphClass::Loopless, &opts).unwrap();
        assert!(!r.strictly_optimal.is_empty());
        for graph in &r.strictly_optimal {
            let orbits = graph.orbits();
            let w = graph.well_chosen_from(&orbits);
            assert_eq!(w.size, orbits.m);
            assert!(graph.free_double_edges_and_cones().free_doubles.len() < 8);
            match w.shape {
                OrbitShape::Stars => {
                    assert_eq!(graph.orbit_components(&w).len(), 1, "g={g}");
                    assert_eq!(w.size, 3);
                }
                OrbitShape::IsolatedEdges if g >= 8 => assert!(w.size <= 3),
                // below genus 8 the optimum can be a pseudocycle of double edges
                OrbitShape::IsolatedEdges => {
                    assert!(w.size <= 3 || double_edges(graph) == g as usize - 1, "g={g}");
                }
                OrbitShape::WholeGraph => assert_eq!(g, 4),
                other => panic!("g={g}: unexpected well-chosen shape {other:?}"),
            }
        }
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let run = |jobs| {
        clear_cache();
        let opts = EnumOptions { jobs: Some(jobs), ..EnumOptions::default() };
        enumerate_with(6, GraphClass::Loopless, &opts).unwrap().to_mel_stream()
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn checkpoint_resume() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loopless6.ckpt");
    clear_cache();
    let opts =
        EnumOptions { jobs: Some(2), checkpoint: Some(path.clone()), batch_limit: Some(1), ..EnumOptions::default() };
    match enumerate_with(6, GraphClass::Loopless, &opts) {
        Err(EnumError::Interrupted { done, total }) => assert!(done > 0 && done < total),
        other => panic!("expected an interruption, got {other:?}"),
    }
    let state = parse_checkpoint(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!((state.genus, state.class), (6, GraphClass::Loopless));
    assert!(companion_path(&path).exists());

    let resumed = enumerate_with(6, GraphClass::Loopless, &EnumOptions { batch_limit: None, ..opts }).unwrap();
    clear_cache();
    let fresh = enumerate(6, GraphClass::Loopless).unwrap();
    assert_eq!(resumed.to_mel_stream(), fresh.to_mel_stream());
}

#[test]
fn caps() {
    assert!(matches!(enumerate(8, GraphClass::LoopsAllowed), Err(EnumError::CapExceeded { .. })));
    assert!(matches!(enumerate(1, GraphClass::Loopless), Err(EnumError::GenusTooSmall(1))));
    assert_eq!(enumerate::Caps::default().cap(GraphClass::Simple), 9);
}
