use clap::Parser;
use locol::cli::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    std::process::exit(run(config));
}
