use clap::Parser;

use amcf::cli::{self, Cli};

fn main() {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    std::process::exit(cli::run(&cli));
}
