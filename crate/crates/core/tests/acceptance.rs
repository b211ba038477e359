//! Acceptance run: every criterion at its stated size, tolerance and time
//! limit, one PASS/FAIL line each. Exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use symcl_core::verify::{self, Corpus, Scope, SuiteReport};

struct Criterion {
    id: usize,
    title: &'static str,
    suites: &'static [&'static str],
    limit: Option<Duration>,
}

const CRITERIA: [Criterion; 10] = [
    Criterion {
        id: 1,
        title: "negation is an involution (m-types of depth <= 4, 2 atoms)",
        suites: &["negation-involution"],
        limit: Some(Duration::from_secs(1)),
    },
    Criterion {
        id: 2,
        title: "subject reduction in both calculi (size <= 9)",
        suites: &["subject-reduction-ls", "subject-reduction-ccl"],
        limit: Some(Duration::from_secs(5 * 60)),
    },
    Criterion {
        id: 3,
        title: "typable c-terms are pre-terms or star-terms",
        suites: &["pre-star-dichotomy"],
        limit: None,
    },
    Criterion {
        id: 4,
        title: "phi and psi preserve types (size <= 8)",
        suites: &["phi-typing", "psi-typing"],
        limit: None,
    },
    Criterion {
        id: 5,
        title: "bracket abstraction computes substitution (U <= 6, V <= 3, 50 steps)",
        suites: &["bracket-abstraction-reduction"],
        limit: None,
    },
    Criterion {
        id: 6,
        title: "omega-reductions are simulated by phi (size <= 8, 50 steps)",
        suites: &["omega-simulation"],
        limit: None,
    },
    Criterion {
        id: 7,
        title: "CCL rules and table rows are simulated by psi (100 steps)",
        suites: &["psi-simulation"],
        limit: None,
    },
    Criterion {
        id: 8,
        title: "non-confluence witnesses have exactly two normal forms",
        suites: &["non-confluence"],
        limit: None,
    },
    Criterion {
        id: 9,
        title: "typable terms are strongly normalizing (size <= 9, budget 1e5)",
        suites: &["strong-normalization-ls", "strong-normalization-ccl"],
        limit: Some(Duration::from_secs(10 * 60)),
    },
    Criterion {
        id: 10,
        title: "print/parse round trip on the corpus and the golden file",
        suites: &["round-trip", "golden-round-trip"],
        limit: None,
    },
];

fn main() {
    let corpus = Corpus::new(Scope::full());
    let golden = verify::GOLDEN
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .count();
    let mut all_ok = true;
    for c in &CRITERIA {
        let start = Instant::now();
        let reports: Vec<SuiteReport> = c
            .suites
            .iter()
            .map(|s| verify::run(s, &corpus).expect("known suite"))
            .collect();
        let elapsed = start.elapsed();
        let failed: usize = reports.iter().map(|r| r.failed).sum();
        let instances: usize = reports.iter().map(|r| r.instances).sum();
        let in_time = c.limit.is_none_or(|l| elapsed < l);
        let golden_ok = c.id != 10 || golden >= 50;
        let ok = failed == 0 && instances > 0 && in_time && golden_ok;
        all_ok &= ok;
        let limit = c.limit.map_or(String::new(), |l| format!(" (limit {}s)", l.as_secs()));
        println!(
            "{} [{:>2}] {}: {} instances, {} failures, {:.2}s{}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            instances,
            failed,
            elapsed.as_secs_f64(),
            limit,
        );
        for r in &reports {
            println!(
                "       {}: {} instances, {} failures, {:.2}s",
                r.name,
                r.instances,
                r.failed,
                r.wall_time.as_secs_f64()
            );
            for n in &r.notes {
                println!("         note: {n}");
            }
            for f in r.failures.iter().take(5) {
                println!("         input:    {}", f.input);
                println!("         expected: {}", f.expected);
                println!("         got:      {}", f.got);
            }
        }
        if c.id == 10 {
            println!("       golden entries: {golden}");
        }
    }
    if !all_ok {
        std::process::exit(1);
    }
}
