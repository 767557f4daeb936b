//! One line per acceptance criterion. Criteria with a known, analysed
//! failure report FAIL; the test then insists the failures are exactly the
//! pinned ones, so any new failure or any unexpected fix turns it red.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use common::{brute_dart_automorphisms, brute_pairings, small_multigraphs};
use dualgraph::enumerate::{enumerate, extremes, EnumOptions};
use dualgraph::families::{candidate, Family};
use dualgraph::numeric::check_inequalities;
use dualgraph::verify::{verify, Status, Suite, VerificationReport, VerifyParams};
use dualgraph::{transforms, GraphClass, Multigraph};
use num_bigint::BigUint;
use num_rational::BigRational;

const TABLE_MAX_GENUS: u64 = 7;
const PART1_MAX_GENUS: u64 = 5;
const ORACLE_MAX_GENUS: usize = 3;
const ORACLE_MAX_DARTS: usize = 12;
const INEQUALITY_GRID: u64 = 512;
const STRUCTURE_MAX_GENUS: u64 = 5;
const STABILIZE_MAX_GENUS: u64 = 4;
const MU1_GENERA: std::ops::RangeInclusive<u64> = 2..=7;
const CPP_GENERA: std::ops::RangeInclusive<u64> = 3..=20;

const CRITERION_3_FAILURES: [&str; 2] = ["Cp 33 order (3(2^m+2^p+1))", "Cp growth 32 -> 33"];

struct Outcome {
    failures: BTreeSet<String>,
    detail: String,
}

impl Outcome {
    fn new(failures: impl IntoIterator<Item = String>, detail: impl Into<String>) -> Self {
        Outcome { failures: failures.into_iter().collect(), detail: detail.into() }
    }
}

fn line(text: &str) {
    // straight to the process stdout so the harness does not capture it
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
    let _ = out.flush();
}

fn run(max_genus: Option<u64>, suite: Suite) -> VerificationReport {
    verify(suite, &VerifyParams { max_genus, extended: false, enum_options: EnumOptions::default() })
}

fn report_failures(r: &VerificationReport) -> Vec<String> {
    r.failures().map(|c| format!("{} {}", r.suite, c.description)).collect()
}

fn summary(r: &VerificationReport) -> String {
    format!("{} {}/{} checks pass", r.suite, r.count(Status::Pass), r.checks.len())
}

fn criterion_1() -> Outcome {
    let r = run(Some(TABLE_MAX_GENUS), Suite::Table);
    let skipped: Vec<String> =
        r.checks.iter().filter(|c| c.status == Status::Skipped).map(|c| c.description.clone()).collect();
    Outcome::new(report_failures(&r).into_iter().chain(skipped), summary(&r))
}

fn named(edges: &[(usize, usize)]) -> Multigraph {
    Multigraph::build(edges).unwrap()
}

fn criterion_2() -> Outcome {
    let graphs = [
        ("theta", named(&[(0, 1), (0, 1), (0, 1)]), 12u64),
        ("tetrahedron", named(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]), 24),
        ("K33", named(&[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]), 72),
        (
            "cube",
            named(&[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)]),
            48,
        ),
        (
            "Petersen",
            named(&[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (0, 5),
                (1, 6),
                (2, 7),
                (3, 8),
                (4, 9),
                (5, 7),
                (7, 9),
                (9, 6),
                (6, 8),
                (8, 5),
            ]),
            120,
        ),
    ];
    let mut failures = Vec::new();
    for (name, g, want) in &graphs {
        if g.aut_order() != BigUint::from(*want) {
            failures.push(format!("{name}: {} != {want}", g.aut_order()));
        }
    }
    for g in CPP_GENERA {
        let c = candidate(Family::Cdprime, g).unwrap();
        let want = BigUint::from(g - 1) << g as usize;
        if c.graph.genus() != g as i64 || c.graph.aut_order() != want {
            failures.push(format!("C''_{g}: {} != {want}", c.graph.aut_order()));
        }
    }
    Outcome::new(failures, format!("5 named graphs, C'' for g in {CPP_GENERA:?}"))
}

fn criterion_3() -> Outcome {
    let r = run(None, Suite::Candidates);
    let failures = r.failures().map(|c| c.description.clone());
    Outcome::new(failures, summary(&r))
}

fn criterion_4() -> Outcome {
    let r = run(Some(PART1_MAX_GENUS), Suite::TheoremPart1);
    Outcome::new(report_failures(&r), format!("{} (g=2 table regime, max 12)", summary(&r)))
}

fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    let mut graphs = 0;
    let mut pinched = 0;
    for g in 2..=ORACLE_MAX_GENUS {
        for class in [GraphClass::LoopsAllowed, GraphClass::Loopless, GraphClass::Simple] {
            let brute = brute_pairings(g, class);
            let ours = enumerate(g as u64, class).unwrap();
            if brute.len() != ours.total() {
                failures.push(format!("g={g} {class}: {} representatives, oracle {}", ours.total(), brute.len()));
            }
            let mut want: Vec<(String, BigUint)> =
                brute.iter().map(|b| (b.to_canonical_mel(), BigUint::from(brute_dart_automorphisms(b)))).collect();
            let mut got: Vec<(String, BigUint)> =
                ours.representatives.iter().map(|r| (r.graph.to_canonical_mel(), r.aut_order.clone())).collect();
            want.sort();
            got.sort();
            if want != got {
                failures.push(format!("g={g} {class}: representatives or orders differ from the oracle"));
            }
        }
        for b in brute_pairings(g, GraphClass::LoopsAllowed) {
            for e in 0..b.edge_count() {
                let (u, v) = b.edge(e);
                if u == v {
                    continue;
                }
                let p = transforms::pinch(&b, e).unwrap().graph;
                pinched += 1;
                if p.aut_order() != BigUint::from(brute_dart_automorphisms(&p)) {
                    failures.push(format!("pinched {} edge {e}", b.to_mel().replace('\n', " ")));
                }
            }
        }
    }
    for m in small_multigraphs(ORACLE_MAX_DARTS / 2) {
        let g = m.to_graph();
        graphs += 1;
        if g.aut_order() != BigUint::from(brute_dart_automorphisms(&g)) {
            failures.push(format!("aut order of {}", g.to_mel().replace('\n', " ")));
        }
    }
    Outcome::new(
        failures,
        format!("g <= {ORACLE_MAX_GENUS}; {graphs} graphs with <= {ORACLE_MAX_DARTS} darts, {pinched} pinched graphs"),
    )
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();

    let mut clause3 = Vec::new();
    for u in 1..=INEQUALITY_GRID {
        for v in 1..=INEQUALITY_GRID {
            let c = check_inequalities(u, v);
            if !c.weight || !c.superadditive || c.product == Some(false) {
                failures.push(format!("inequalities ({u},{v}) clause 1, 2 or 4"));
            }
            if c.product_plus_one == Some(false) {
                clause3.push((u, v));
            }
        }
    }
    let pinned: Vec<(u64, u64)> = (4..=INEQUALITY_GRID).map(|u| (u, 1)).collect();
    if clause3 != pinned {
        failures.push(format!("clause 3 failure set changed: {} pairs", clause3.len()));
    }
    failures.push(format!("clause 3 fails at v=1 for 4 <= u <= {INEQUALITY_GRID}"));

    let inequalities = run(Some(INEQUALITY_GRID), Suite::Inequalities);
    for c in inequalities.failures() {
        if !c.description.starts_with("clause 3 ") {
            failures.push(format!("inequalities {}", c.description));
        }
    }

    let structure = run(Some(STRUCTURE_MAX_GENUS), Suite::Structure);
    for c in structure.failures() {
        if !c.description.contains("stabilize(pinch(G, e))") {
            failures.push(format!("structure {}", c.description));
        }
    }

    // stabilize∘pinch: identity on simple edges, never on double edges
    let mut double_edges = 0;
    for g in 2..=STABILIZE_MAX_GENUS {
        for r in &enumerate(g, GraphClass::LoopsAllowed).unwrap().representatives {
            for e in 0..r.graph.edge_count() {
                let class = r.graph.class_of_edge(e).unwrap();
                if class.is_loop() {
                    continue;
                }
                let p = transforms::pinch(&r.graph, e).unwrap();
                let back = transforms::stabilize(&p.graph).unwrap().graph;
                let same = back.is_isomorphic(&r.graph).unwrap();
                match (class.multiplicity(), same) {
                    (2, false) => double_edges += 1,
                    (_, true) if class.multiplicity() != 2 => {}
                    (m, _) => failures.push(format!("stabilize(pinch) g={g} multiplicity {m} gives {same}")),
                }
            }
        }
    }
    failures.push("stabilize(pinch(G, e)) differs from G on every double edge".to_owned());
    Outcome::new(
        failures,
        format!(
            "{}, {}, {double_edges} double-edge pinches do not stabilize back",
            summary(&inequalities),
            summary(&structure)
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    for g in MU1_GENERA {
        let r = extremes(g, GraphClass::Loopless, &EnumOptions::default()).unwrap();
        if r.mu1 != BigRational::from_integer(1.into()) {
            failures.push(format!("g={g} mu_1 = {}", r.mu1));
        }
    }
    Outcome::new(failures, format!("loopless, g in {MU1_GENERA:?}"))
}

fn criterion_8() -> Outcome {
    let ts = run(None, Suite::TsboundConsistency);
    let part2 = run(None, Suite::TheoremPart2Table);
    Outcome::new(
        report_failures(&ts).into_iter().chain(report_failures(&part2)),
        format!("substituted: {}, {}, candidate lower bounds in criterion 3", summary(&ts), summary(&part2)),
    )
}

#[test]
fn acceptance_criteria() {
    type Criterion = (u32, fn() -> Outcome, Vec<String>, Duration);
    let criteria: [Criterion; 8] = [
        (1, criterion_1, vec![], Duration::from_secs(300)),
        (2, criterion_2, vec![], Duration::from_secs(60)),
        (3, criterion_3, CRITERION_3_FAILURES.iter().map(|s| s.to_string()).collect(), Duration::from_secs(120)),
        (4, criterion_4, vec![], Duration::from_secs(600)),
        (5, criterion_5, vec![], Duration::from_secs(300)),
        (
            6,
            criterion_6,
            vec![
                format!("clause 3 fails at v=1 for 4 <= u <= {INEQUALITY_GRID}"),
                "stabilize(pinch(G, e)) differs from G on every double edge".to_owned(),
            ],
            Duration::from_secs(900),
        ),
        (7, criterion_7, vec![], Duration::from_secs(300)),
        (8, criterion_8, vec![], Duration::from_secs(600)),
    ];
    let mut surprises = Vec::new();
    for (n, check, pinned, budget) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let pinned: BTreeSet<String> = pinned.into_iter().collect();
        let verdict = if outcome.failures.is_empty() { "PASS" } else { "FAIL" };
        line(&format!("criterion {n}: {verdict} ({}; {:.1}s)", outcome.detail, elapsed.as_secs_f64()));
        for f in &outcome.failures {
            line(&format!("    {f}"));
        }
        if outcome.failures != pinned {
            surprises.push(format!("criterion {n}: failures {:?}, expected {:?}", outcome.failures, pinned));
        }
        if elapsed > budget {
            surprises.push(format!("criterion {n}: took {elapsed:?}, budget {budget:?}"));
        }
    }
    assert!(surprises.is_empty(), "{surprises:#?}");
}

#[test]
#[ignore = "enumerates loopless genus 9; about an hour"]
fn extended_table() {
    let params = VerifyParams { max_genus: None, extended: true, enum_options: EnumOptions::default() };
    let r = verify(Suite::Table, &params);
    line(&format!("criterion 1 (extended): {} ({})", r.overall().label(), summary(&r)));
    assert_eq!(r.overall(), Status::Pass, "{r}");
}
