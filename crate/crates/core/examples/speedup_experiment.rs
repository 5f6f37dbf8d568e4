//! A full experiment in memory: families, cases, matrix and audit.
//!
//! ```bash
//! cargo run --release --example speedup_experiment -- resolution
//! ```

use proof_speedup::experiment::{audit, build_cases, incidence, run_cases, speedup_matrix, Engine, ExperimentConfig, RunOptions};
use proof_speedup::formula::GenerationParams;
use proof_speedup::report::audit_report;

fn main() {
    let engine: Engine = std::env::args().nth(1).map_or(Engine::Exact, |s| s.parse().unwrap());
    let params = match engine {
        Engine::Exact => GenerationParams::new(1, 2),
        Engine::Resolution => GenerationParams::new(2, 3),
    }
    .unwrap();
    let mut config = ExperimentConfig::new(params, 2, 6, 5, 3);
    config.engine = engine;

    let design = build_cases(&config).unwrap();
    for (f, fam) in design.families.iter().enumerate() {
        let base: Vec<String> = fam.base.formulas().iter().map(|x| x.to_string()).collect();
        println!("family {f}: base {{{}}} + {} derived", base.join(", "), fam.derived.len());
    }
    let results = run_cases(&design, &RunOptions::default()).unwrap();
    let matrix = speedup_matrix(&design.layout(), &results).unwrap();
    println!("\nincidence (+ positive, - negative, 0 zero, . undefined):");
    print!("{}", incidence(&matrix));
    println!();
    print!("{}", audit_report(&audit(&matrix), 1));
}
