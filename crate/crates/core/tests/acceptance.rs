//! The ten acceptance criteria, each with its sample size and time budget.
//! Every criterion prints one line; the test fails if any of them fails.

use std::time::{Duration, Instant};

use lambda_building::building::{
    axiom_suite, epimorphism_suite, four_point_suite, quotient_suite, retraction_suite,
};
use lambda_building::cone::cone_suite;
use lambda_building::exact_fields::{field_axioms_check, Exponent};
use lambda_building::report::CheckReport;
use lambda_building::symmetric_space::{kostant_suite, metric_suite};
use lambda_building::valuation::valuation_axioms_check;

const SEED: u64 = 20240;

struct Criterion {
    id: usize,
    name: &'static str,
    budget: Duration,
    run: fn() -> Vec<CheckReport>,
}

fn both(f: fn(usize) -> CheckReport) -> Vec<CheckReport> {
    vec![f(2), f(3)]
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            name: "field layer, 1000 triples, depth 8",
            budget: Duration::from_secs(10),
            run: || vec![field_axioms_check(1000, Exponent::from_integer(8), SEED)],
        },
        Criterion {
            id: 2,
            name: "valuation axioms, 1000 samples",
            budget: Duration::from_secs(5),
            run: || vec![valuation_axioms_check(1000, SEED)],
        },
        Criterion {
            id: 3,
            name: "metric on P_n, 200 samples, n = 2, 3",
            budget: Duration::from_secs(60),
            run: || both(|n| metric_suite(n, 200, SEED)),
        },
        Criterion {
            id: 4,
            name: "quotient identification, 200 pairs, n = 2, 3",
            budget: Duration::from_secs(60),
            run: || both(|n| quotient_suite(n, 200, SEED)),
        },
        Criterion {
            id: 5,
            name: "building axioms A1-A6, 100 configurations, n = 2, 3",
            budget: Duration::from_secs(120),
            run: || {
                [2, 3]
                    .iter()
                    .flat_map(|&n| axiom_suite(n, 100, SEED).summary)
                    .collect()
            },
        },
        Criterion {
            id: 6,
            name: "four-point condition, 500 quadruples, n = 2",
            budget: Duration::from_secs(30),
            run: || vec![four_point_suite(500, SEED)],
        },
        Criterion {
            id: 7,
            name: "retraction contraction, 200 instances, n = 2, 3",
            budget: Duration::from_secs(30),
            run: || both(|n| retraction_suite(n, 200, SEED)),
        },
        Criterion {
            id: 8,
            name: "cone dual-path identity, 100 pairs, n = 2, 3",
            budget: Duration::from_secs(30),
            run: || both(|n| cone_suite(n, 100, SEED)),
        },
        Criterion {
            id: 9,
            name: "Kostant convexity, 100 pairs, n = 2, 3",
            budget: Duration::from_secs(60),
            run: || both(|n| kostant_suite(n, 100, SEED)),
        },
        Criterion {
            id: 10,
            name: "germ and infinity coherence, 100 sectors, n = 2, 3",
            budget: Duration::from_secs(30),
            run: || both(|n| epimorphism_suite(n, 100, SEED)),
        },
    ]
}

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for c in criteria() {
        let start = Instant::now();
        let reports = (c.run)();
        let elapsed = start.elapsed();
        let checks: usize = reports.iter().map(|r| r.checks).sum();
        let ok = reports.iter().all(CheckReport::passed) && elapsed <= c.budget;
        println!(
            "criterion {:>2} {} {} ({} checks, {:.2?} of {:?})",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.name,
            checks,
            elapsed,
            c.budget
        );
        if !ok {
            for r in reports.iter().filter(|r| !r.passed()) {
                println!("  {}", r);
            }
            failed.push(c.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {:?}", failed);
}
