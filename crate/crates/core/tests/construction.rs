use std::time::Instant;

use intersective::certifier::{decide_by_local_solvability, Verdict};
use intersective::constructor::{construct, lower_bound_for, replay, ConstructionParams, StepRule};
use intersective::oracle::{sweep, verify_certificate};

#[test]
fn constructions_are_minimal_for_small_seeds() {
    for n in 4..=8 {
        for (p1, p2) in [(3, 5), (3, 7), (5, 7)] {
            let start = Instant::now();
            let c = construct(&ConstructionParams::new(n, p1, p2)).unwrap();
            assert_eq!(c.family.len(), n);
            assert!(c.report.is_minimal(), "n={n} seeds=({p1},{p2})");
            assert!(verify_certificate(&c.report));
            assert_eq!(decide_by_local_solvability(&c.family), Verdict::Intersective);
            for step in c.trace.steps.iter().filter(|s| s.rule == StepRule::Search) {
                let prefix = &c.family.members()[..step.index - 1];
                assert_eq!(step.lower_bound, lower_bound_for(prefix));
                assert!(step.value > step.lower_bound.clone().into());
            }
            assert_eq!(replay(&c.trace).unwrap(), c.family);
            assert_eq!(sweep(&c.family, 10_000).first_failure, None);
            eprintln!("n={n} ({p1},{p2}) {} in {:?}", c.family, start.elapsed());
        }
    }
}
