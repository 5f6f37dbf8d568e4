//! Seeded theories and objectives drawn from P(1, 2).
//!
//! ```bash
//! cargo run --example sample_theories -- 42
//! ```

use proof_speedup::formula::GenerationParams;
use proof_speedup::theory::{sample_objectives, sample_theories, SampleSpec};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let params = GenerationParams::new(1, 2).unwrap();
    let spec = SampleSpec::new(2, 4, 5, seed);

    let bases = sample_theories(&params, &spec).unwrap();
    println!("{} theories after {} draws ({} unsatisfiable)", bases.theories.len(), bases.attempts, bases.rejected);
    for t in &bases.theories {
        let text: Vec<String> = t.formulas().iter().map(|f| f.to_string()).collect();
        println!("  indices {:?}  {{{}}}", t.members().iter().map(|i| i.to_string()).collect::<Vec<_>>(), text.join(", "));
    }

    let objectives = sample_objectives(&params, &spec).unwrap();
    println!("objectives (jointly satisfiable, {} dropped):", objectives.dropped.len());
    for (i, phi) in objectives.indices.iter().zip(&objectives.formulas) {
        println!("  {i:>3}  {phi}");
    }
}
