use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use diagasym::report::{emit_report, parse_config, render, run_analysis, Format};

#[derive(Parser)]
#[command(name = "diagasym", version, about = "Leading asymptotics of diagonal coefficients of rational generating functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Json,
    Markdown,
    Csv,
}

impl From<EmitArg> for Format {
    fn from(e: EmitArg) -> Self {
        match e {
            EmitArg::Json => Format::Json,
            EmitArg::Markdown => Format::Markdown,
            EmitArg::Csv => Format::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one job described by a TOML config file.
    Analyze {
        config: PathBuf,
        /// Output formats (overrides `emit` in the config).
        #[arg(long, value_enum, value_delimiter = ',')]
        emit: Vec<EmitArg>,
        /// Largest diagonal step checked against the exact oracle.
        #[arg(long)]
        oracle_n: Option<usize>,
        /// Directory for report files; without it reports go to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Extra Newton starting point, comma separated (repeatable).
        #[arg(long, value_delimiter = ',', num_args = 1.., action = clap::ArgAction::Append)]
        seed: Vec<f64>,
        /// Residual accepted for enumerated critical points.
        #[arg(long)]
        tol_residual: Option<f64>,
        /// Suppress the summary on stderr.
        #[arg(long)]
        quiet: bool,
    },
}

const EXIT_CONFIG: u8 = 1;
const EXIT_IO: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    let Command::Analyze {
        config,
        emit,
        oracle_n,
        out,
        seed,
        tol_residual,
        quiet,
    } = cli.command;

    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config.display());
            return ExitCode::from(EXIT_IO);
        }
    };
    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", config.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if !emit.is_empty() {
        cfg.emit = emit.into_iter().map(Format::from).collect();
    }
    if let Some(n) = oracle_n {
        cfg.oracle_n = n;
    }
    if !seed.is_empty() {
        cfg.seeds.push(seed);
    }
    if tol_residual.is_some() {
        cfg.tolerances.residual = tol_residual;
    }
    let report = match run_analysis(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", config.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };

    let formats: Vec<Format> = cfg.emit.iter().copied().collect();
    let written = match &out {
        Some(dir) => {
            let stem = config.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
            emit_report(&report, &formats, dir, stem)
        }
        None => {
            let mut stdout = io::stdout().lock();
            formats
                .iter()
                .try_for_each(|&f| stdout.write_all(render(&report, f).as_bytes()))
                .map(|_| Vec::new())
        }
    };
    let written = match written {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: writing report: {e}");
            return ExitCode::from(EXIT_IO);
        }
    };
    if !quiet {
        for p in &written {
            eprintln!("wrote {}", p.display());
        }
        let verdict = report.verdict.map(|v| v.to_string()).unwrap_or_else(|| "none".into());
        eprintln!("verdict: {verdict}, warnings: {}", report.warnings.len());
        for w in &report.warnings {
            eprintln!("  warning: {w}");
        }
    }
    ExitCode::SUCCESS
}
