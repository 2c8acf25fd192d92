mod commands;
mod config;
mod selftest;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use causalchop::chop::multi::{ChopOptions, DEFAULT_REFINE_LIMIT};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use commands::{Failure, Output};
use config::ConfigFile;

#[derive(Parser)]
#[command(name = "causalchop", version, about = "Posteriority, chopping and Wick expansion for string-localized fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Input JSON file, `-` for stdin.
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
    /// Report destination; stdout when absent.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Kernel {
    #[arg(long, value_name = "K")]
    refine_limit: Option<u32>,
    /// Worker threads for the chopping kernel.
    #[arg(long, value_name = "W", env = "CAUSALCHOP_JOBS")]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Closed,
    Recursive,
    Compare,
}

#[derive(Subcommand)]
enum Command {
    /// Causal classes, span classes and the pairwise order matrix.
    Classify {
        #[command(flatten)]
        io: Io,
    },
    /// Chop one pair (`--pair I J`) or the whole configuration (`--all`).
    #[command(group(ArgGroup::new("target").required(true).args(["pair", "all"])))]
    Chop {
        #[command(flatten)]
        io: Io,
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Option<Vec<usize>>,
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        kernel: Kernel,
    },
    /// Time-ordered product of the configuration's fields.
    Wick {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value = "closed")]
        mode: Mode,
        #[command(flatten)]
        kernel: Kernel,
    },
    /// Diagonal stratum of a pair of strings.
    Stratum {
        #[command(flatten)]
        io: Io,
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Option<Vec<usize>>,
    },
    /// Re-check a report written by `chop` or `wick`.
    Verify {
        #[command(flatten)]
        io: Io,
    },
    /// Run reduced randomized verification suites.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
        #[command(flatten)]
        kernel: Kernel,
    },
}

#[derive(Serialize)]
struct RunReport {
    command: &'static str,
    input_sha256: Option<String>,
    outputs: Value,
    verification: &'static str,
}

fn read_input(path: &PathBuf) -> Result<Vec<u8>, Failure> {
    let res = if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map(|_| buf)
    } else {
        fs::read(path)
    };
    res.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_config(bytes: &[u8]) -> Result<ConfigFile, Failure> {
    let text = std::str::from_utf8(bytes).map_err(|_| Failure::Usage("input is not UTF-8".into()))?;
    ConfigFile::parse(text).map_err(|e| Failure::Usage(e.to_string()))
}

fn chop_options(kernel: &Kernel, cfg: Option<&ConfigFile>) -> ChopOptions {
    let file = cfg.map(|c| c.options.clone()).unwrap_or_default();
    ChopOptions {
        refine_limit: kernel.refine_limit.or(file.refine_limit).unwrap_or(DEFAULT_REFINE_LIMIT),
        jobs: kernel.jobs.or(file.jobs).filter(|&j| j > 0),
    }
}

fn pair_arg(pair: &Option<Vec<usize>>) -> Option<(usize, usize)> {
    pair.as_ref().map(|p| (p[0], p[1]))
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

struct Run {
    command: &'static str,
    input: Option<Vec<u8>>,
    output: Option<PathBuf>,
    result: Output,
}

fn execute(command: Command) -> Result<Run, Failure> {
    Ok(match command {
        Command::Classify { io } => {
            let bytes = read_input(&io.input)?;
            let cfg = load_config(&bytes)?;
            let output = io.output.or(cfg.options.output.clone().map(PathBuf::from));
            Run { command: "classify", result: commands::classify(&cfg)?, input: Some(bytes), output }
        }
        Command::Chop { io, pair, all: _, kernel } => {
            let bytes = read_input(&io.input)?;
            let cfg = load_config(&bytes)?;
            let opts = chop_options(&kernel, Some(&cfg));
            let output = io.output.or(cfg.options.output.clone().map(PathBuf::from));
            Run { command: "chop", result: commands::chop(&cfg, pair_arg(&pair), &opts)?, input: Some(bytes), output }
        }
        Command::Wick { io, mode, kernel } => {
            let bytes = read_input(&io.input)?;
            let cfg = load_config(&bytes)?;
            let opts = chop_options(&kernel, Some(&cfg));
            let mode = match mode {
                Mode::Closed => "closed",
                Mode::Recursive => "recursive",
                Mode::Compare => "compare",
            };
            let output = io.output.or(cfg.options.output.clone().map(PathBuf::from));
            Run { command: "wick", result: commands::wick(&cfg, mode, &opts)?, input: Some(bytes), output }
        }
        Command::Stratum { io, pair } => {
            let bytes = read_input(&io.input)?;
            let cfg = load_config(&bytes)?;
            let output = io.output.or(cfg.options.output.clone().map(PathBuf::from));
            Run { command: "stratum", result: commands::stratum(&cfg, pair_arg(&pair))?, input: Some(bytes), output }
        }
        Command::Verify { io } => {
            let bytes = read_input(&io.input)?;
            let doc: Value = serde_json::from_slice(&bytes).map_err(|e| {
                Failure::Usage(format!("invalid JSON at line {}, column {}: {e}", e.line(), e.column()))
            })?;
            Run { command: "verify", result: commands::verify(&doc)?, input: Some(bytes), output: io.output }
        }
        Command::Selftest { seed, output, kernel } => {
            let opts = chop_options(&kernel, None);
            let suites = selftest::run(seed, &opts);
            for s in &suites {
                eprintln!("{}: {} ({})", s.name, if s.pass { "PASS" } else { "FAIL" }, s.detail);
            }
            let pass = suites.iter().all(|s| s.pass);
            Run {
                command: "selftest",
                result: Output { outputs: json!({"seed": seed, "suites": suites}), verified: Some(pass) },
                input: None,
                output,
            }
        }
    })
}

fn emit(run: &Run) -> Result<(), Failure> {
    let report = RunReport {
        command: run.command,
        input_sha256: run.input.as_deref().map(sha256_hex),
        outputs: run.result.outputs.clone(),
        verification: match run.result.verified {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "not_applicable",
        },
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    match &run.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let outcome = execute(cli.command).and_then(|run| {
        emit(&run)?;
        match run.result.verified {
            Some(false) => Err(Failure::Verification("verification failed".into())),
            _ => Ok(()),
        }
    });
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
