//! Clause form and a checked resolution refutation.
//!
//! ```bash
//! cargo run --example resolution_refutation
//! ```

use proof_speedup::formula::{parse, parse_list};
use proof_speedup::prover::{check_refutation, clausify, resolution_prove, Certificate, ProverBudget};

fn main() {
    let t = parse_list("p1 <-> p2, p2 -> p3").unwrap();
    let g = parse("p1 -> p3").unwrap();
    for phi in t.iter().chain([&g]) {
        let clauses: Vec<String> = clausify(phi).iter().map(|c| c.to_string()).collect();
        println!("{phi:<12} {}", clauses.join("  "));
    }
    let out = resolution_prove(&t, &g, &ProverBudget::default());
    if let Some(Certificate::Refutation(r)) = proof_certificate(&out) {
        print!("{r}");
        check_refutation(r, &t, &g).unwrap();
    }
    println!("D = {:?}, {} clauses generated", out.length().map(|l| l.get()), out.states());
}

fn proof_certificate(out: &proof_speedup::prover::ProverOutcome) -> Option<&Certificate> {
    match out {
        proof_speedup::prover::ProverOutcome::Proved { proof, .. } => Some(proof),
        _ => None,
    }
}
