//! Command-line driver: computes exact epsilon motives and DT invariants
//! of instance files, and runs the consistency-check suite.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dtcalc::commands::{
    cmd_check, cmd_dt, cmd_epsilon, cmd_inspect, load, load_text, LoadedInstance,
};
use dtcalc::instance::CliError;
use dtcalc::report::Report;
use dtcalc::BUNDLED_CORPUS;

#[derive(Parser)]
#[command(name = "dtcalc", version, about = "Exact Donaldson-Thomas invariants of linear torus quotients")]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the special faces, cones, and measures of an instance
    Inspect { file: PathBuf },
    /// Compute an epsilon motive in a given degree or along a given cone
    Epsilon {
        file: PathBuf,
        /// Virtual-rank degree
        #[arg(long)]
        k: Option<usize>,
        /// Special cone id (as listed by inspect, or a declared cone name)
        #[arg(long)]
        cone: Option<String>,
        /// Name of a measure declared in the instance
        #[arg(long)]
        measure: String,
    },
    /// Compute a DT invariant
    Dt {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        measure: String,
        /// Return the motivic invariant (a rational function in q) instead
        /// of the numerical one
        #[arg(long)]
        motivic: bool,
    },
    /// Run the consistency-check suite on one instance or the whole corpus
    Check {
        file: Option<PathBuf>,
        /// Check every instance of the corpus
        #[arg(long)]
        all: bool,
    },
}

fn corpus_instances() -> Result<Vec<LoadedInstance>, CliError> {
    match std::env::var_os("DTCALC_CORPUS") {
        Some(dir) => {
            let dir = PathBuf::from(dir);
            let entries = std::fs::read_dir(&dir)
                .map_err(|e| CliError::Io(dir.display().to_string(), e))?;
            let mut files: Vec<PathBuf> = entries
                .filter_map(|e| e.ok())
                .map(|e| e.path())
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            files.sort();
            if files.is_empty() {
                eprintln!(
                    "warning: corpus directory {} contains no instance files; nothing to check",
                    dir.display()
                );
            }
            files.iter().map(|p| load(p)).collect()
        }
        None => BUNDLED_CORPUS
            .iter()
            .map(|(name, text)| load_text(name, text))
            .collect(),
    }
}

fn emit(reports: &[Report], json: bool, as_list: bool) {
    if json {
        let rendered: Vec<String> = reports.iter().map(|r| r.to_json()).collect();
        if as_list {
            println!("[{}]", rendered.join(",\n"));
        } else {
            println!("{}", rendered[0]);
        }
    } else {
        for (i, r) in reports.iter().enumerate() {
            if i > 0 {
                println!();
            }
            if as_list {
                println!("== {} ==", r.file);
            }
            print!("{}", r.to_human());
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match &cli.cmd {
        Cmd::Inspect { file } => {
            let inst = load(file)?;
            emit(&[cmd_inspect(&inst)?], cli.json, false);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Epsilon { file, k, cone, measure } => {
            let inst = load(file)?;
            emit(&[cmd_epsilon(&inst, *k, cone.as_deref(), measure)?], cli.json, false);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Dt { file, k, measure, motivic } => {
            let inst = load(file)?;
            emit(&[cmd_dt(&inst, *k, measure, *motivic)?], cli.json, false);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check { file, all } => {
            let instances = match (file, all) {
                (Some(_), true) => {
                    return Err(CliError::Schema(
                        "pass either a file or --all, not both".into(),
                    ))
                }
                (Some(f), false) => vec![load(f)?],
                (None, _) => corpus_instances()?,
            };
            let mut reports = Vec::new();
            for inst in &instances {
                reports.push(cmd_check(inst)?);
            }
            emit(&reports, cli.json, file.is_none());
            let ok = reports.iter().all(|r| r.all_pass());
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
