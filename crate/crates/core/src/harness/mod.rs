//! The experiment driver behind the `graphdim` binary.
//!
//! Every subcommand produces a [`ResultTable`] written as CSV (to `--out` or
//! standard output), with an optional plot-data file for scale series. A
//! `--config FILE` of `key = value` lines supplies flags; flags given on the
//! command line take precedence. Exit status: 0 when every row passes, 1 when
//! any row fails, 2 on usage, configuration or module errors.

mod args;
mod config;
mod run;
mod table;

use std::ffi::OsString;

use clap::Parser;

pub use args::*;
pub use config::{parse_config, splice_config};
pub use run::{cantor, energy, estimate, lemma52, packing_series, prevalence, report, run, statement31};
pub use table::{
    emit_csv, emit_plotdata, read_csv, write_csv, PlotSeries, ResultRow, ResultTable, CODE_VERSION, CSV_COLUMNS,
};

#[derive(Debug, Parser)]
#[command(
    name = "graphdim",
    version,
    about = "Dimension experiments on graphs over compact metric spaces",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match splice_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(&cli.command) {
        Ok(pass) => {
            if pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Runs a command, writes its outputs and reports whether every row passed.
pub fn execute(command: &Command) -> crate::Result<bool> {
    let table = run(command)?;
    let common = command.common();
    match &common.out {
        Some(path) => emit_csv(&table, path)?,
        None => write_csv(&table, std::io::stdout().lock()).map_err(|source| crate::Error::Csv {
            path: "<stdout>".into(),
            source,
        })?,
    }
    if let Some(path) = &common.plot {
        let header = vec![
            format!("experiment {}", command.name()),
            format!("seed {}", common.seed),
            format!("version {CODE_VERSION}"),
        ];
        emit_plotdata(&table, path, &header)?;
    }
    let failed: Vec<&ResultRow> = table.rows.iter().filter(|r| !r.pass).collect();
    eprintln!(
        "{}: {} rows, {} failed",
        command.name(),
        table.rows.len(),
        failed.len()
    );
    for r in &failed {
        eprintln!("  FAIL {} value={} reference={:?} {}", r.experiment, r.value, r.reference, r.param_json);
    }
    Ok(failed.is_empty())
}
