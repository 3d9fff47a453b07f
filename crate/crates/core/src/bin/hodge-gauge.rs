use clap::Parser;
use hodge_gauge::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let batch = run(&cli);
    print!("{}", batch.to_json());
    std::process::exit(batch.status.exit_code());
}
