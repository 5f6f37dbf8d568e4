//! Shortest natural deduction proofs, re-checked line by line.
//!
//! ```bash
//! cargo run --example exact_proof -- "p1 | p2, ~p1" "p2"
//! ```

use proof_speedup::formula::{parse, parse_list};
use proof_speedup::prover::{check_proof, min_proof_bfs, Certificate, DeductionMode, ProverBudget, ProverOutcome};

fn main() {
    let mut args = std::env::args().skip(1);
    let theory = args.next().unwrap_or_else(|| "p1 -> p2, p2 -> p3".into());
    let goal = args.next().unwrap_or_else(|| "p1 -> p3".into());
    let t = parse_list(&theory).expect("theory");
    let g = parse(&goal).expect("goal");

    for mode in [DeductionMode::Classical, DeductionMode::Intuitionistic] {
        println!("{mode}:");
        match min_proof_bfs(&t, &g, mode, &ProverBudget::default()) {
            ProverOutcome::Proved { proof, length, minimal, states } => {
                print!("{proof}");
                println!("{length} lines, minimal: {minimal}, {states} states");
                if let Certificate::Fitch(p) = &proof {
                    check_proof(p, &t, &g, mode).expect("proof checks");
                }
            }
            ProverOutcome::NotEntailed { .. } => println!("not entailed"),
            ProverOutcome::BudgetExhausted(d) => println!("{} after {} states", d.reason, d.states),
        }
    }
}
