mod args;
mod commands;
mod error;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use dirac_pairings::exec::Execution;

use args::{Cli, Command, FredholmAction, RootDataAction};
use commands::DiracIndexArgs;
use error::CliError;
use report::Report;

const THREADS_VAR: &str = "DIRAC_PAIRINGS_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| CliError::Usage(format!("{THREADS_VAR}={v:?} is not a count")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("{THREADS_VAR}: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let exec = if cli.output.sequential { Execution::Sequential } else { Execution::Parallel };
    match &cli.command {
        Command::RootData { action: RootDataAction::Show { group } } => commands::root_data_show(group),
        Command::DiracIndex { group, params, chi, chamber, limit } => commands::dirac_index(DiracIndexArgs {
            group,
            params,
            chi: chi.as_deref(),
            chamber: *chamber,
            limit: *limit,
        }),
        Command::Pair { kind, group, params } => commands::pair(*kind, group, params, exec),
        Command::Fredholm { action: FredholmAction::Check { suite, seed, instances } } => {
            commands::fredholm_check(suite, *seed, *instances, exec)
        }
        Command::Lab { action, group, max, modules } => commands::lab(*action, group, *max, modules, exec),
    }
}

fn write_report(cli: &Cli, report: &Report) -> Result<(), CliError> {
    let text = report.render(cli.output.format);
    match &cli.output.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let result = configure_threads().and_then(|()| dispatch(&cli)).and_then(|r| write_report(&cli, &r).map(|()| r));
    if cli.output.timing {
        eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(r) if r.passed() => ExitCode::SUCCESS,
        Ok(r) => {
            for c in r.checks.iter().filter(|c| !c.passed) {
                eprintln!("identity failed: {}", c.name);
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
