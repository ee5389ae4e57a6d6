use clap::Parser;
use qnf_cli::{execute, Cli};

fn main() {
    if let Some(n) = qnf_core::par::limit_threads_from_env() {
        eprintln!("QNF_THREADS = {n}");
    }
    let cli = Cli::parse();
    let (status, message) = execute(&cli, std::env::args().skip(1).collect());
    eprintln!("{message}");
    std::process::exit(status.exit_code());
}
