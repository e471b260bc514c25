use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cdd_core::decoupling::DecouplingGroup;
use cdd_core::lie_algebra::{reconcile_appendix, BasisKind, GeneratorBasis};
use cdd_core::scenario::{
    euler_report_json, preset, run_euler, run_scenario, simulate_scenario, EulerRequest, RunOptions, Scenario,
    SweepParameter, SweepSpec,
};
use cdd_core::{Error, Result};

const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "cdd",
    version,
    about = "Continuous dynamical decoupling with bounded controls"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reconcile adjoint plane decompositions against the printed tables.
    Tables {
        /// su2, su3 or su4
        group: String,
    },
    /// Trajectories, decoupling check and optional robustness sweep.
    Run {
        /// Sweep parameter and range, e.g. `--sweep amplitude 0.9:1.1:21`.
        #[arg(long, num_args = 2, value_names = ["PARAM", "START:STOP:COUNT"])]
        sweep: Option<Vec<String>>,
        /// Integration steps per segment.
        #[arg(long)]
        steps: Option<usize>,
        /// Relative decoupling tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Exit 0 whenever the run completes.
        #[arg(long)]
        no_check: bool,
        scenario: PathBuf,
    },
    /// Build and validate an Eulerian decoupling schedule.
    Euler { group: PathBuf, pulses: PathBuf },
    /// Bath simulation: coherence curves and average Hamiltonian terms.
    Simulate { scenario: PathBuf },
    /// Print a preset scenario as JSON.
    Preset { name: String },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn print_artifacts(paths: &[PathBuf]) {
    for p in paths {
        eprintln!("wrote {}", p.display());
    }
}

fn execute(command: Command) -> Result<u8> {
    match command {
        Command::Tables { group } => {
            let kind = BasisKind::from_group_tag(&group)
                .ok_or_else(|| Error::InvalidInput(format!("unknown group `{group}`; expected su2, su3 or su4")))?;
            let entries = reconcile_appendix(&GeneratorBasis::new(kind));
            emit(&format!("{}\n", serde_json::to_string_pretty(&entries)?));
            Ok(0)
        }
        Command::Run {
            sweep,
            steps,
            tol,
            no_check,
            scenario,
        } => {
            let sweep = match sweep.as_deref() {
                Some([param, range]) => Some(SweepSpec::parse(param.parse::<SweepParameter>()?, range)?),
                Some(_) => return Err(Error::InvalidInput("--sweep takes a parameter and a range".into())),
                None => None,
            };
            let s: Scenario = parse(&scenario)?;
            let options = RunOptions {
                steps_per_segment: steps,
                tolerance: tol,
                sweep,
                no_check,
                out_dir: None,
            };
            let outcome = run_scenario(&s, &options)?;
            print_artifacts(&outcome.artifacts);
            for e in &outcome.report.entries {
                println!(
                    "{}: |s'| = {:.3e} (threshold {:.3e}) {}",
                    e.gamma,
                    e.norm,
                    e.threshold,
                    if e.decoupled { "decoupled" } else { "NOT decoupled" }
                );
            }
            for w in &outcome.watch {
                println!(
                    "{}: max deviation {:.3e} {}",
                    w.gamma,
                    w.max_deviation,
                    if w.invariant { "invariant" } else { "NOT invariant" }
                );
            }
            for note in &outcome.report.notes {
                println!("note: {note}");
            }
            Ok(outcome.verdict.exit_code() as u8)
        }
        Command::Euler { group, pulses } => {
            let g: DecouplingGroup = parse(&group)?;
            let request: EulerRequest = parse(&pulses)?;
            let (report, _) = run_euler(&g, &request)?;
            emit(&euler_report_json(&report)?);
            let decoupled = report.average.as_ref().is_none_or(|a| a.decoupled);
            Ok(if decoupled { 0 } else { 1 })
        }
        Command::Simulate { scenario } => {
            let s: Scenario = parse(&scenario)?;
            let outcome = simulate_scenario(&s, None)?;
            print_artifacts(&outcome.artifacts);
            Ok(0)
        }
        Command::Preset { name } => {
            emit(&format!("{}\n", serde_json::to_string_pretty(&preset(&name)?)?));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
