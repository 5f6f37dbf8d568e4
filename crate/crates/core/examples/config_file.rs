//! Config files: defaults, overrides and the normalised form.
//!
//! ```bash
//! cargo run --example config_file -- configs/small.toml
//! ```

use proof_speedup::report::{emit_config, load_config, parse_config};

fn main() {
    let config = match std::env::args().nth(1) {
        Some(path) => load_config(path.as_ref()).unwrap_or_else(|e| {
            eprintln!("{e}");
            std::process::exit(3);
        }),
        None => parse_config("[sampling]\nx = 4\no = 3\n\n[prover]\nengine = \"resolution\"\n").unwrap(),
    };
    let text = emit_config(&config);
    print!("{text}");
    assert_eq!(parse_config(&text).unwrap(), config);
}
