//! `ivmap`: construct interval maps of prescribed Sharkovskii type and
//! entropy, and certify them.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 a certification was
//! refuted, 3 a branch budget ran out (inconclusive).

mod analyze;
mod construct;
mod plot;
mod sweep;
mod util;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "ivmap", version, about = "Piecewise-linear interval maps of type 2^d p and entropy log(lambda)/2^d")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a map and write its JSON document.
    Construct(construct::ConstructArgs),
    /// Certify a map document: type, entropy, mixing, covering graph.
    Analyze(analyze::AnalyzeArgs),
    /// Construct and certify a grid of parameters.
    Sweep(sweep::SweepArgs),
    /// Draw a map document as SVG.
    Plot(plot::PlotArgs),
}

fn main() -> ExitCode {
    // clap exits with 2 on bad arguments; usage errors are 1 here
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(util::EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Construct(a) => construct::run(a).map(|()| 0),
        Command::Analyze(a) => analyze::run(a),
        Command::Sweep(a) => sweep::run(a),
        Command::Plot(a) => plot::run(a).map(|()| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("ivmap: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
