use std::collections::BTreeMap;
use trirep::catalog;
use trirep::gauss::GaussianRational;
use trirep::solver::{solve_min_rep, KOutcome, MinRepOutcome, SolveConfig};

fn main() {
    let ids: Vec<String> = std::env::args().skip(1).collect();
    let entries = catalog::builtin().unwrap();
    for id in ids {
        let idx = catalog::find(&entries, &id).unwrap_or_else(|| panic!("no entry {id}"));
        let entry = &entries[idx];
        // substitute first admissible sample values for parametric laws
        let law = if entry.law.is_parametric() {
            let mut vals = BTreeMap::new();
            for name in entry.law.ring().names() {
                vals.insert(name.clone(), GaussianRational::from_int(2));
            }
            entry.law.substitute(&vals).unwrap()
        } else {
            entry.law.clone()
        };
        let t0 = std::time::Instant::now();
        let report = solve_min_rep(&law, &SolveConfig::default());
        let dt = t0.elapsed();
        match report {
            Ok(r) => {
                let audit: Vec<String> = r.audit.iter().map(|(k, o)| match o {
                    KOutcome::Infeasible(c) => format!("k={k}:infeasible({})", c.len()),
                    KOutcome::Solution(_) => format!("k={k}:solution"),
                    KOutcome::Unresolved { .. } => format!("k={k}:unresolved"),
                }).collect();
                match r.outcome {
                    MinRepOutcome::Found { k, status, .. } => {
                        println!("{id}: FOUND k={k} {status:?} in {dt:?} [{}]", audit.join(" "));
                    }
                    MinRepOutcome::Inconclusive { reason } => {
                        println!("{id}: INCONCLUSIVE ({reason}) in {dt:?} [{}]", audit.join(" "));
                    }
                }
            }
            Err(e) => println!("{id}: ERROR {e}"),
        }
    }
}
