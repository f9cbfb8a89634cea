//! The `kgforge` command line.
//!
//! Exit codes: 0 on success, 1 for configuration or IO problems, 2 when a
//! stage fails or input does not validate, 3 when a refinement is rejected
//! because it removes elements without a mapping.

pub mod commands;
pub mod config;
pub mod error;
pub mod rundir;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use kgforge_core::agent::Backend;
use kgforge_core::stages::RefinementReport;

use crate::commands::{ontology_text, read_ontology, run_ontology_path, Session};
use crate::config::{Cli, Command, OntologyCommand};
use crate::error::CliError;

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    run_with(args, None, &mut out)
}

/// Like [`run`], with `agent` standing in for the live HTTP model and all
/// normal output written to `out`.
pub fn run_with<I, T>(args: I, agent: Option<Box<dyn Backend>>, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    init_logging(cli.verbose);
    match execute(cli, agent, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("kgforge: {e}");
            e.exit_code()
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => tracing::Level::WARN,
        1 => tracing::Level::INFO,
        _ => tracing::Level::DEBUG,
    };
    let _ = tracing_subscriber::fmt().with_writer(std::io::stderr).with_max_level(level).with_target(false).try_init();
}

fn execute(cli: Cli, agent: Option<Box<dyn Backend>>, out: &mut dyn Write) -> Result<(), CliError> {
    let opts = cli.options.resolve()?;
    let mut s = Session::new(opts, agent, out);
    match cli.command {
        Command::Ontology(OntologyCommand::Build) => s.ontology_build().map(drop),
        Command::Ontology(OntologyCommand::Refine) => {
            let dir = rundir::existing(&s.opts)?;
            let report = s.ontology_refine(&dir)?;
            refine_outcome(&report)
        }
        Command::Populate { ontology: Some(path) } => {
            let o = read_ontology(&path)?;
            let dir = rundir::create(&s.opts)?;
            let existing = dir.join(rundir::ONTOLOGY);
            if !existing.exists() {
                rundir::write(&dir, rundir::ONTOLOGY, &ontology_text(&o))?;
            } else if read_ontology(&existing)? != o {
                return Err(CliError::Config(format!(
                    "{} already holds a different ontology than {}",
                    dir.display(),
                    path.display()
                )));
            }
            s.populate(&dir, &o)
        }
        Command::Populate { ontology: None } => {
            let dir = rundir::existing(&s.opts)?;
            let o = read_ontology(&run_ontology_path(&dir)?)?;
            s.populate(&dir, &o)
        }
        Command::Report => {
            let dir = rundir::existing(&s.opts)?;
            s.report(&dir)
        }
        Command::Validate { file, ontology } => s.validate(&file, ontology.as_deref()),
        Command::RunAll => {
            let dir = s.ontology_build()?;
            let report = s.ontology_refine(&dir)?;
            if let Err(e) = refine_outcome(&report) {
                tracing::warn!("{e}; populating with the unrefined ontology");
            }
            let o = read_ontology(&run_ontology_path(&dir)?)?;
            s.populate(&dir, &o)
        }
    }
}

fn refine_outcome(report: &RefinementReport) -> Result<(), CliError> {
    if report.accepted {
        return Ok(());
    }
    let reason = report.error.clone().unwrap_or_else(|| "refinement rejected".into());
    if report.unmapped_removals.is_empty() {
        Err(CliError::Invalid(format!("refinement failed: {reason}")))
    } else {
        let names: Vec<&str> = report.unmapped_removals.iter().map(|i| i.as_str()).collect();
        Err(CliError::Rejected(format!(
            "refinement rejected, unmapped removals: {} (use --allow-drops to accept)",
            names.join(", ")
        )))
    }
}
