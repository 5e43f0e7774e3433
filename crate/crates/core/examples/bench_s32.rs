use trirep::format::algebra_from_str;
use trirep::solver::{solve_min_rep, MinRepOutcome, SolveConfig};

fn main() {
    let a = algebra_from_str("dim 3\nbracket 1 3 -> 2: 1\n");
    let t0 = std::time::Instant::now();
    let report = solve_min_rep(&a, &SolveConfig::default()).unwrap();
    println!("elapsed: {:?}", t0.elapsed());
    println!("lower bound: {}", report.lower_bound);
    for (k, o) in &report.audit {
        println!("k={k}: {}", match o {
            trirep::solver::KOutcome::Infeasible(c) => format!("infeasible ({} certs)", c.len()),
            trirep::solver::KOutcome::Solution(_) => "solution".into(),
            trirep::solver::KOutcome::Unresolved { certificate, search } => format!("unresolved: cert={certificate} search={search}"),
        });
    }
    match report.outcome {
        MinRepOutcome::Found { k, rep, status } => {
            println!("k = {k}, status = {status:?}");
            println!("{}", trirep::format::serialize_rep(&rep));
        }
        MinRepOutcome::Inconclusive { reason } => println!("inconclusive: {reason}"),
    }
}
