//! The `qnf` command line: each subcommand reads its inputs, runs one
//! construction or check, stages its outputs and records a manifest.
//! Exit codes: 0 pass, 2 input error, 3 certificate failure, 1 i/o failure.

pub mod args;
pub mod commands;
pub mod run;

use std::time::Instant;

pub use args::{Cli, Command, TradeoffCommand};
pub use run::{CliError, RunContext, RunManifest, Status};

/// Runs one parsed command line; returns the status and a one-line summary.
pub fn execute(cli: &Cli, argv: Vec<String>) -> (Status, String) {
    let started = Instant::now();
    let mut ctx = RunContext::new(cli.out.clone(), cli.seed);
    let (name, result) = match &cli.command {
        Command::Approx(a) => ("approx", commands::approx(&mut ctx, a)),
        Command::Tradeoff(TradeoffCommand::Precision(a)) => ("tradeoff precision", commands::precision(&mut ctx, a)),
        Command::Tradeoff(TradeoffCommand::Magnitude(a)) => ("tradeoff magnitude", commands::magnitude(&mut ctx, a)),
        Command::Quantize(a) => ("quantize", commands::quantize(&mut ctx, a)),
        Command::Extract(a) => ("extract", commands::extract_cmd(&mut ctx, a)),
        Command::Regimes(a) => ("regimes", commands::regimes(&mut ctx, a)),
        Command::Eval(a) => ("eval", commands::eval(&mut ctx, a).map(|lines| {
            for l in lines {
                println!("{l}");
            }
        })),
        Command::RandomNet(a) => ("random-net", commands::random_net(&mut ctx, a)),
    };
    for c in ctx.checks() {
        eprintln!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    for m in &ctx.messages {
        eprintln!("{m}");
    }
    ctx.finish(name, argv, result, started)
}
