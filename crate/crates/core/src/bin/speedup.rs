use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;

use proof_speedup::experiment::{
    audit, build_cases, incidence, read_matrix, read_results, run_cases, speedup_matrix, write_matrix, write_results,
    Engine, ExperimentConfig, RunOptions,
};
use proof_speedup::formula::{count, parse, parse_list, ConnectiveSet, Enumeration, GenerationParams};
use proof_speedup::prover::{DeductionMode, ProverBudget, ProverOutcome};
use proof_speedup::report::{audit_report, emit_config, export_tptp, load_config, render_incidence, render_panels, RenderSpec};

#[derive(Parser)]
#[command(name = "speedup", version, about = "Proof length speed-up experiments over propositional theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Space {
    /// Maximum composition depth.
    #[arg(short = 'n', long)]
    depth: u32,
    /// Number of variables.
    #[arg(short = 'm', long)]
    vars: u32,
    /// Comma-separated binary connectives.
    #[arg(long, default_value = "iff,implies,and,or")]
    ops: ConnectiveSet,
}

impl Space {
    fn params(&self) -> Result<GenerationParams, Failure> {
        GenerationParams::with_ops(self.depth, self.vars, self.ops).map_err(|e| Failure::Usage(e.to_string()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print formulas of P(n, m) with their 1-based indices.
    Enumerate {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        from: Option<BigUint>,
        #[arg(long)]
        to: Option<BigUint>,
    },
    /// Print the size of P(n, m).
    Count {
        #[command(flatten)]
        space: Space,
    },
    /// Prove one argument and print the proof.
    Prove {
        /// Comma-separated premises.
        #[arg(short, long, default_value = "")]
        theory: String,
        #[arg(short, long)]
        goal: String,
        #[arg(long, default_value = "exact")]
        engine: Engine,
        #[arg(long, default_value = "classical")]
        mode: DeductionMode,
        #[arg(long)]
        max_states: Option<usize>,
        #[arg(long)]
        max_lines: Option<usize>,
    },
    /// Run a full experiment from a config file.
    Run {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Record per-case wall-clock time in the results.
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        threads: Option<usize>,
        /// Label of the summary row.
        #[arg(long, default_value_t = 1)]
        exp_num: u32,
    },
    /// Rebuild the speed-up matrix from a config and its results.
    Matrix {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short, long)]
        results: PathBuf,
        /// Defaults to stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Draw a matrix as PPM.
    Render {
        #[arg(short, long)]
        matrix: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Cell side in pixels.
        #[arg(long, default_value_t = 4)]
        cell: usize,
        #[arg(long)]
        grayscale: bool,
        /// Split columns over this many images named `<out>-<k>.ppm`.
        #[arg(long)]
        panels: Option<usize>,
    },
    /// Summarise a matrix.
    Audit {
        #[arg(short, long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 1)]
        exp_num: u32,
    },
    /// Write one argument as a TPTP problem.
    ExportTptp {
        #[arg(short, long, conflicts_with = "config")]
        theory: Option<String>,
        #[arg(short, long, requires = "theory")]
        goal: Option<String>,
        /// Take the argument from an experiment instead.
        #[arg(short, long, requires_all = ["column", "row"])]
        config: Option<PathBuf>,
        #[arg(long)]
        column: Option<usize>,
        #[arg(long)]
        row: Option<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Config(String),
    Io(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Config(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Config(m) | Failure::Io(m) | Failure::Other(m) => m,
        }
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| io_failure(path, e))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn config(path: &Path) -> Result<ExperimentConfig, Failure> {
    load_config(path).map_err(|e| Failure::Config(e.to_string()))
}

fn stdout_failure(e: io::Error) -> Failure {
    Failure::Io(format!("stdout: {e}"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("speedup: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Enumerate { space, from, to } => {
            let params = space.params()?;
            let first = from.unwrap_or_else(|| BigUint::from(1u32));
            let last = to.unwrap_or_else(|| count(&params));
            let mut out = BufWriter::new(io::stdout().lock());
            let mut index = first.clone().max(BigUint::from(1u32));
            for phi in Enumeration::new(&params).range(first, last) {
                match writeln!(out, "{index}\t{phi}") {
                    Err(e) if e.kind() == io::ErrorKind::BrokenPipe => return Ok(()),
                    r => r.map_err(stdout_failure)?,
                }
                index += 1u32;
            }
            out.flush().or_else(|e| if e.kind() == io::ErrorKind::BrokenPipe { Ok(()) } else { Err(e) }).map_err(stdout_failure)
        }
        Command::Count { space } => {
            println!("{}", count(&space.params()?));
            Ok(())
        }
        Command::Prove {
            theory,
            goal,
            engine,
            mode,
            max_states,
            max_lines,
        } => {
            let t = parse_list(&theory).map_err(|e| Failure::Usage(format!("theory: {e}")))?;
            let g = parse(&goal).map_err(|e| Failure::Usage(format!("goal: {e}")))?;
            let mut c = ExperimentConfig::default();
            c.engine = engine;
            c.mode = mode;
            c.budget = ProverBudget {
                max_states: max_states.unwrap_or(c.budget.max_states),
                max_lines: max_lines.unwrap_or(c.budget.max_lines),
                ..c.budget
            };
            match proof_speedup::experiment::prove(&c, &t, &g) {
                ProverOutcome::Proved { proof, length, minimal, states } => {
                    print!("{proof}");
                    println!("D = {length}{} ({states} states)", if minimal { ", minimal" } else { "" });
                }
                ProverOutcome::NotEntailed { .. } => println!("not entailed"),
                ProverOutcome::BudgetExhausted(d) => {
                    println!("gave up: {} after {} states", d.reason, d.states)
                }
            }
            Ok(())
        }
        Command::Run {
            config: path,
            out,
            seed,
            timing,
            threads,
            exp_num,
        } => {
            let mut c = config(&path)?;
            if let Some(s) = seed {
                c.seed = s;
            }
            let design = build_cases(&c).map_err(|e| Failure::Config(e.to_string()))?;
            let results = run_cases(&design, &RunOptions { threads, timing }).map_err(|e| Failure::Other(e.to_string()))?;
            let matrix = speedup_matrix(&design.layout(), &results).map_err(|e| Failure::Other(e.to_string()))?;
            let a = audit(&matrix);
            fs::create_dir_all(&out).map_err(|e| io_failure(&out, e))?;
            let results_csv = write_results(&design.columns, &results, c.seed).map_err(|e| Failure::Other(e.to_string()))?;
            write(&out.join("results.csv"), results_csv)?;
            let matrix_csv = write_matrix(&matrix, &emit_config(&c)).map_err(|e| Failure::Other(e.to_string()))?;
            write(&out.join("matrix.csv"), matrix_csv)?;
            let image = render_incidence(&matrix, &RenderSpec::default()).map_err(|e| Failure::Other(e.to_string()))?;
            write(&out.join("incidence.ppm"), image)?;
            let report = audit_report(&a, exp_num);
            write(&out.join("audit.txt"), &report)?;
            print!("{}", incidence(&matrix));
            println!();
            print!("{report}");
            Ok(())
        }
        Command::Matrix {
            config: path,
            results,
            out,
        } => {
            let c = config(&path)?;
            let design = build_cases(&c).map_err(|e| Failure::Config(e.to_string()))?;
            let rs = read_results(&read(&results)?).map_err(|e| io_failure(&results, e))?;
            let m = speedup_matrix(&design.layout(), &rs).map_err(|e| Failure::Other(e.to_string()))?;
            let text = write_matrix(&m, &emit_config(&c)).map_err(|e| Failure::Other(e.to_string()))?;
            emit(out.as_deref(), &text)
        }
        Command::Render {
            matrix,
            out,
            cell,
            grayscale,
            panels,
        } => {
            let (m, _) = read_matrix(&read(&matrix)?).map_err(|e| io_failure(&matrix, e))?;
            let spec = RenderSpec { cell, grayscale };
            match panels {
                None => {
                    let img = render_incidence(&m, &spec).map_err(|e| Failure::Usage(e.to_string()))?;
                    write(&out, img)
                }
                Some(k) => {
                    let imgs = render_panels(&m, &spec, k).map_err(|e| Failure::Usage(e.to_string()))?;
                    let stem = out.with_extension("");
                    for (i, img) in imgs.iter().enumerate() {
                        write(&PathBuf::from(format!("{}-{}.ppm", stem.display(), i + 1)), img)?;
                    }
                    Ok(())
                }
            }
        }
        Command::Audit { matrix, exp_num } => {
            let (m, _) = read_matrix(&read(&matrix)?).map_err(|e| io_failure(&matrix, e))?;
            print!("{}", audit_report(&audit(&m), exp_num));
            Ok(())
        }
        Command::ExportTptp {
            theory,
            goal,
            config: path,
            column,
            row,
            out,
        } => {
            let text = match (theory, goal, path) {
                (Some(t), Some(g), None) => {
                    let t = parse_list(&t).map_err(|e| Failure::Usage(format!("theory: {e}")))?;
                    let g = parse(&g).map_err(|e| Failure::Usage(format!("goal: {e}")))?;
                    export_tptp(&t, &g)
                }
                (None, None, Some(p)) => {
                    let design = build_cases(&config(&p)?).map_err(|e| Failure::Config(e.to_string()))?;
                    let (col, r) = (column.unwrap_or(0), row.unwrap_or(0));
                    if col >= design.columns.len() || r >= design.rows() {
                        return Err(Failure::Usage(format!(
                            "cell ({r}, {col}) is outside the {} x {} grid",
                            design.rows(),
                            design.columns.len()
                        )));
                    }
                    export_tptp(design.theory(col).formulas(), design.objective(r))
                }
                _ => return Err(Failure::Usage("give --theory and --goal, or --config with --column and --row".into())),
            };
            emit(out.as_deref(), &text)
        }
    }
}
