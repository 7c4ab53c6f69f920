//! Driving experiments from code and writing the result table.

use clap::Parser;
use graphdim::harness::{run, write_csv, Cli};

fn main() -> graphdim::Result<()> {
    let argv = ["graphdim", "estimate", "--space", "cantor", "--variant", "liminf", "--n", "4..10"];
    let cli = Cli::parse_from(argv);
    let mut table = run(&cli.command)?;
    let cli = Cli::parse_from(["graphdim", "cantor", "--n-max", "2"]);
    table.extend(run(&cli.command)?);
    write_csv(&table, std::io::stdout().lock()).expect("stdout");
    eprintln!("all pass: {}", table.all_pass());
    Ok(())
}
