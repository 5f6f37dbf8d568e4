//! Building a proof one line at a time by asking a speed-up oracle which
//! line to write next.
//!
//! ```bash
//! cargo run --example oracle_guided
//! ```

use proof_speedup::formula::{parse, parse_list};
use proof_speedup::prover::{min_proof_bfs, oracle_guided_search, DeductionMode, ProverBudget};

fn main() {
    let cases = [("p1 & p2", "p2 & p1"), ("p1 -> p2, ~p2", "~p1"), ("p1 | p2, p1 -> p3, p2 -> p3", "p3")];
    let budget = ProverBudget::default();
    for (t, g) in cases {
        let t = parse_list(t).unwrap();
        let g = parse(g).unwrap();
        let guided = oracle_guided_search(&t, &g, DeductionMode::Classical, &budget).unwrap();
        let exact = min_proof_bfs(&t, &g, DeductionMode::Classical, &budget);
        println!("{} ⊢ {g}", t.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", "));
        print!("{}", guided.proof);
        println!(
            "guided {} lines with {} oracle calls, exact search {:?}\n",
            guided.length,
            guided.oracle_calls,
            exact.length().map(|l| l.get())
        );
    }
}
