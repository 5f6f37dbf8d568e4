//! Experiment configuration files.
//!
//! A config is TOML with three tables; every key is optional.
//!
//! ```toml
//! [space]
//! depth = 2                # n, maximum composition depth
//! vars = 2                 # m, variables p1..pm
//! ops = ["iff", "implies", "and", "or"]
//!
//! [sampling]
//! j = 2                    # base theory size
//! x = 10                   # number of base theories
//! o = 6                    # objective candidates
//! derived_prefixes = 6     # defaults to o
//! seed = 0
//! attempts_per_theory = 1000
//!
//! [prover]
//! engine = "exact"         # or "resolution"
//! mode = "classical"       # or "intuitionistic"
//! max_lines = 40
//! max_states = 300000
//! # max_depth = 4          # intermediate formula depth cap
//! # time_limit_ms = 1000   # makes results machine dependent
//! ```

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::experiment::{Engine, ExperimentConfig};
use crate::formula::{ConnectiveSet, GenerationParams};
use crate::prover::{DeductionMode, ProverBudget};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    space: Space,
    sampling: Sampling,
    prover: Prover,
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct Space {
    depth: u32,
    vars: u32,
    ops: ConnectiveSet,
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct Sampling {
    j: usize,
    x: usize,
    o: usize,
    derived_prefixes: Option<usize>,
    seed: u64,
    attempts_per_theory: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct Prover {
    engine: Engine,
    mode: DeductionMode,
    max_lines: usize,
    max_states: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_depth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    time_limit_ms: Option<u64>,
}

impl Default for ConfigFile {
    fn default() -> Self {
        ConfigFile::from(&ExperimentConfig::default())
    }
}

impl Default for Space {
    fn default() -> Self {
        ConfigFile::default().space
    }
}

impl Default for Sampling {
    fn default() -> Self {
        let c = ExperimentConfig::default();
        Sampling {
            j: c.j,
            x: c.x,
            o: c.o,
            derived_prefixes: None,
            seed: c.seed,
            attempts_per_theory: c.attempts_per_theory,
        }
    }
}

impl Default for Prover {
    fn default() -> Self {
        ConfigFile::default().prover
    }
}

impl From<&ExperimentConfig> for ConfigFile {
    fn from(c: &ExperimentConfig) -> Self {
        ConfigFile {
            space: Space {
                depth: c.params.depth,
                vars: c.params.vars,
                ops: c.params.ops,
            },
            sampling: Sampling {
                j: c.j,
                x: c.x,
                o: c.o,
                derived_prefixes: Some(c.derived_prefixes),
                seed: c.seed,
                attempts_per_theory: c.attempts_per_theory,
            },
            prover: Prover {
                engine: c.engine,
                mode: c.mode,
                max_lines: c.budget.max_lines,
                max_states: c.budget.max_states,
                max_depth: c.budget.max_depth,
                time_limit_ms: c.budget.time_limit.map(|d| d.as_millis() as u64),
            },
        }
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let params = GenerationParams::new(2, 2).expect("P(2, 2) is indexable");
        ExperimentConfig::new(params, 2, 10, 6, 0)
    }
}

/// Parses and validates a config.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let file: ConfigFile = toml::from_str(text)?;
    let params = GenerationParams::with_ops(file.space.depth, file.space.vars, file.space.ops)
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let s = file.sampling;
    let p = file.prover;
    let config = ExperimentConfig {
        params,
        j: s.j,
        x: s.x,
        o: s.o,
        derived_prefixes: s.derived_prefixes.unwrap_or(s.o),
        mode: p.mode,
        engine: p.engine,
        budget: ProverBudget {
            max_lines: p.max_lines,
            max_depth: p.max_depth,
            max_states: p.max_states,
            time_limit: p.time_limit_ms.map(Duration::from_millis),
        },
        seed: s.seed,
        attempts_per_theory: s.attempts_per_theory,
    };
    config.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
    Ok(config)
}

/// Emits every field explicitly; `parse_config` inverts it.
pub fn emit_config(config: &ExperimentConfig) -> String {
    toml::to_string(&ConfigFile::from(config)).expect("config tables serialize")
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let c = parse_config("").unwrap();
        assert_eq!(c, ExperimentConfig::default());
        assert_eq!(c.derived_prefixes, c.o);
    }

    #[test]
    fn emit_parse_is_idempotent() {
        let text = "[space]\ndepth = 1\nvars = 3\nops = [\"and\", \"implies\"]\n[sampling]\no = 4\nseed = 9\n[prover]\nengine = \"resolution\"\ntime_limit_ms = 250\n";
        let c = parse_config(text).unwrap();
        assert_eq!(c.engine, Engine::Resolution);
        assert_eq!(c.derived_prefixes, 4);
        assert_eq!(c.budget.time_limit, Some(Duration::from_millis(250)));
        let once = emit_config(&c);
        let again = emit_config(&parse_config(&once).unwrap());
        assert_eq!(once, again);
        assert_eq!(parse_config(&once).unwrap(), c);
    }

    #[test]
    fn errors_are_classified() {
        assert!(matches!(parse_config("[space]\ndepth = \"x\""), Err(ConfigError::Parse(_))));
        assert!(matches!(parse_config("[sampling]\nbogus = 1"), Err(ConfigError::Parse(_))));
        assert!(matches!(parse_config("[sampling]\nx = 0"), Err(ConfigError::Invalid(_))));
        assert!(matches!(parse_config("[sampling]\no = 2\nderived_prefixes = 3"), Err(ConfigError::Invalid(_))));
        assert!(matches!(load_config(Path::new("/nonexistent/x.toml")), Err(ConfigError::Read { .. })));
    }
}
