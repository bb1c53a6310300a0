use clap::{Parser, Subcommand, ValueEnum};
use spt_core::harness::{emit_results, run, ExperimentConfig, OutputFormat};
use spt_core::SimError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "spt", version, about = "Run AKLT and cluster-state simulation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Doc,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config and write its result file.
    Run {
        config: PathBuf,
        #[arg(long, env = "SPT_OUT_DIR", default_value = "results")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let Command::Run { config, out, format, threads } = cli.command;
    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config.display());
            return ExitCode::from(2);
        }
    };
    let cfg = match ExperimentConfig::parse(&text).and_then(|c| c.validate().map(|_| c)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(k) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let format = match format {
        Format::Table => OutputFormat::Table,
        Format::Doc => OutputFormat::Doc,
    };
    match run(&cfg).and_then(|o| emit_results(&o, format, &out)) {
        Ok(path) => {
            println!("{}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            let kind = match e {
                SimError::InvalidArgument(_) => "invalid_argument",
                SimError::DegenerateBoundary => "degenerate_boundary",
                SimError::DegenerateProjection(_) => "degenerate_projection",
                SimError::Config(_) => "config",
                SimError::Io(_) => "io",
            };
            eprintln!("{{\"error\":\"{kind}\",\"message\":{}}}", serde_json::Value::from(e.to_string()));
            ExitCode::from(1)
        }
    }
}
