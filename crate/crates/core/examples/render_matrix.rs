//! Colour and grayscale images of an incidence matrix.
//!
//! ```bash
//! cargo run --example render_matrix -- /tmp/incidence
//! ```

use std::path::PathBuf;

use proof_speedup::experiment::{build_cases, run_cases, speedup_matrix, ExperimentConfig, RunOptions};
use proof_speedup::formula::GenerationParams;
use proof_speedup::report::{render_incidence, render_panels, RenderSpec};

fn main() {
    let dir = std::env::args().nth(1).map_or_else(std::env::temp_dir, PathBuf::from);
    std::fs::create_dir_all(&dir).unwrap();
    let config = ExperimentConfig::new(GenerationParams::new(1, 2).unwrap(), 2, 4, 4, 9);
    let design = build_cases(&config).unwrap();
    let results = run_cases(&design, &RunOptions::default()).unwrap();
    let matrix = speedup_matrix(&design.layout(), &results).unwrap();

    let color = RenderSpec { cell: 12, grayscale: false };
    let gray = RenderSpec { cell: 12, grayscale: true };
    let outputs = [
        ("incidence.ppm", render_incidence(&matrix, &color).unwrap()),
        ("incidence-gray.ppm", render_incidence(&matrix, &gray).unwrap()),
    ];
    for (name, bytes) in outputs {
        std::fs::write(dir.join(name), &bytes).unwrap();
        println!("wrote {} ({} bytes)", dir.join(name).display(), bytes.len());
    }
    for (k, panel) in render_panels(&matrix, &color, 2).unwrap().into_iter().enumerate() {
        let path = dir.join(format!("incidence-{}.ppm", k + 1));
        std::fs::write(&path, panel).unwrap();
        println!("wrote {}", path.display());
    }
}
