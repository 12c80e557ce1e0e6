//! Command-line front end.

use crate::error::Error;
use crate::instance::Instance;
use crate::oracle::{brute_force_packing, DEFAULT_PACKING_CAP};
use crate::solver::{solve_with, SolveOptions};
use clap::{Parser, Subcommand};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_ORACLE_CAP: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "mader", about = "Maximum vertex-disjoint S-path packing")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Solve an instance and print the packing.
    Solve {
        path: PathBuf,
        /// Validate every iteration (reconstruction identity, base checks, rank).
        #[arg(long)]
        verify: bool,
        /// Write every base and dependence matrix into this directory.
        #[arg(long, value_name = "DIR")]
        seed_dump: Option<PathBuf>,
        /// Print only the packing.
        #[arg(long)]
        quiet: bool,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Print the brute-force packing number.
    Oracle {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PACKING_CAP)]
        cap: usize,
    },
    /// Write a seeded random connected instance.
    Gen {
        n: usize,
        m: usize,
        k: usize,
        blocks: usize,
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print solver statistics as key=value lines.
    Stats {
        path: PathBuf,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

fn load(path: &Path) -> Result<Instance, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Instance::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidInstance(_) | Error::Generator(_) => EXIT_PARSE,
        Error::OracleCap(_) => EXIT_ORACLE_CAP,
        _ => EXIT_INTERNAL,
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    match cli.cmd {
        Cmd::Solve {
            path,
            verify,
            seed_dump,
            quiet,
            threads,
        } => {
            let inst = match load(&path) {
                Ok(i) => i,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_PARSE;
                }
            };
            let mut opts = SolveOptions::fast();
            opts.threads = threads;
            opts.dump = seed_dump.is_some();
            if verify {
                opts.verify = true;
                opts.augment.verify = true;
            }
            let report = match solve_with(&inst, &opts) {
                Ok(r) => r,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return exit_for(&e);
                }
            };
            if let Some(dir) = seed_dump {
                if let Err(e) = write_dumps(&dir, &report) {
                    let _ = writeln!(err, "error: {}: {e}", dir.display());
                    return EXIT_INTERNAL;
                }
            }
            let _ = write!(out, "{}", report.packing.to_text());
            if !quiet {
                let _ = writeln!(
                    err,
                    "p={} q={} iterations={} elapsed_ms={}",
                    report.packing_size,
                    report.q.map_or("none".into(), |q| q.to_string()),
                    report.iterations(),
                    report.elapsed_ms
                );
            }
            EXIT_OK
        }
        Cmd::Oracle { path, cap } => {
            let inst = match load(&path) {
                Ok(i) => i,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_PARSE;
                }
            };
            match brute_force_packing(&inst, cap) {
                Ok((p, _)) => {
                    let _ = writeln!(out, "{p}");
                    EXIT_OK
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    exit_for(&e)
                }
            }
        }
        Cmd::Gen {
            n,
            m,
            k,
            blocks,
            seed,
            output,
        } => match Instance::random(n, m, k, blocks, seed) {
            Ok(inst) => {
                let text = inst.serialize();
                match output {
                    Some(p) => {
                        if let Err(e) = std::fs::write(&p, text) {
                            let _ = writeln!(err, "error: {}: {e}", p.display());
                            return EXIT_INTERNAL;
                        }
                    }
                    None => {
                        let _ = write!(out, "{text}");
                    }
                }
                EXIT_OK
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                exit_for(&e)
            }
        },
        Cmd::Stats { path, threads } => {
            let inst = match load(&path) {
                Ok(i) => i,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_PARSE;
                }
            };
            let opts = SolveOptions {
                threads,
                ..SolveOptions::fast()
            };
            match solve_with(&inst, &opts) {
                Ok(r) => {
                    let _ = write!(out, "{}", r.stats_text());
                    EXIT_OK
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    exit_for(&e)
                }
            }
        }
    }
}

fn write_dumps(dir: &Path, report: &crate::solver::SolveReport) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (c, comp) in report.components.iter().enumerate() {
        for (i, d) in comp.dumps.iter().enumerate() {
            std::fs::write(dir.join(format!("c{c}_it{i}_base.txt")), format!("{}\n", d.base))?;
            std::fs::write(dir.join(format!("c{c}_it{i}_dep.csv")), &d.dependence_csv)?;
        }
    }
    Ok(())
}
