use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use semunit_server::{run, DEFAULT_BIND, STORE_ENV};

/// Serve a semantic unit store over HTTP.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// Address to listen on.
    #[arg(long, default_value = DEFAULT_BIND)]
    bind: String,
    /// Store directory; the fixture store is served when unset.
    #[arg(long, env = STORE_ENV)]
    store: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args.bind, args.store.as_deref()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
