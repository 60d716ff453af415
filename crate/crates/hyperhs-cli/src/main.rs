//! Batch command-line surface over the library: classification, engine
//! verification sweeps, ablation studies, and GOE comparisons.
//!
//! Exit codes: 0 success, 1 input/tool error, 2 verification failure (a
//! requested mathematical check did not hold). Every stochastic output
//! embeds its seed so runs can be reproduced exactly.

mod commands;
mod output;

use clap::Parser;

fn main() {
    let cli = match commands::Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap would exit with its own code 2; keep 2 reserved for
            // verification failures and report usage problems as 1
            if e.use_stderr() {
                eprint!("{e}");
                std::process::exit(1);
            }
            // --help / --version
            print!("{e}");
            std::process::exit(0);
        }
    };
    match commands::run(cli) {
        Ok(verified) => std::process::exit(if verified { 0 } else { 2 }),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
