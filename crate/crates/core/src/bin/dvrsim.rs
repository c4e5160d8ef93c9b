use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dvrsim::comm::{db_to_linear, reception_radius};
use dvrsim::experiment::{self, format_sig, ExperimentSpec};

#[derive(Parser)]
#[command(name = "dvrsim", version, about = "Mobile collector delay simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate every policy, load and seed; write the result table.
    Run(Common),
    /// Evaluate the delay formulas only; write the result table.
    Bounds(Common),
    /// One run (first policy, load and seed) with a per-message dump.
    Trace(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Seed list (`1,2,3`) or inclusive range (`1..5`), overriding the config.
    #[arg(long)]
    seeds: Option<String>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dvrsim: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(command: Command) -> Result<(), Box<dyn std::error::Error>> {
    let (verb, args) = match &command {
        Command::Run(a) => ("run", a),
        Command::Bounds(a) => ("bounds", a),
        Command::Trace(a) => ("trace", a),
    };
    let mut spec = ExperimentSpec::load(&args.config)?;
    if let Some(s) = &args.seeds {
        spec.seeds = experiment::parse_seeds(s).map_err(|e| format!("--seeds: {e}"))?;
    }
    print_header(verb, &spec)?;
    match command {
        Command::Run(_) => {
            let rows = experiment::run_experiment(&spec, args.parallel)?;
            let path = args.out.join(&spec.results_file);
            experiment::write_table(&rows, &path)?;
            println!("wrote {} rows to {}", rows.len(), path.display());
        }
        Command::Bounds(_) => {
            let rows = experiment::bounds_table(&spec);
            let path = args.out.join(&spec.results_file);
            experiment::write_table(&rows, &path)?;
            println!("wrote {} rows to {}", rows.len(), path.display());
        }
        Command::Trace(_) => {
            let trace = experiment::trace_run(&spec)?;
            let path = args.out.join(&spec.trace_file);
            experiment::dump_messages(&trace, &path)?;
            println!("wrote {} messages to {}", trace.completed.len(), path.display());
        }
    }
    Ok(())
}

fn print_header(verb: &str, spec: &ExperimentSpec) -> Result<(), dvrsim::Error> {
    let s = &spec.scenario;
    println!(
        "# dvrsim {verb}: A={} v={} s={} beta={} alpha={} m={}",
        format_sig(s.area, 6),
        format_sig(s.speed, 6),
        format_sig(s.reception_time, 6),
        format_sig(s.beta, 6),
        format_sig(s.alpha, 6),
        s.collectors
    );
    for &db in &spec.snr_db {
        let r = reception_radius(db_to_linear(db), s.beta, s.alpha)?;
        println!("# SNRc={} dB r*={}", format_sig(db, 6), format_sig(r, 3));
    }
    Ok(())
}
