//! Run directory layout and artifact IO.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::Options;
use crate::error::CliError;

pub const ONTOLOGY: &str = "ontology.ttl";
pub const REFINED: &str = "ontology.refined.ttl";
pub const REFINEMENT: &str = "refinement.json";
pub const TRACE: &str = "trace.json";
pub const KG: &str = "kg.ttl";
pub const RESULTS: &str = "results.json";
pub const REPORT: &str = "report.json";

fn output_dir(o: &Options) -> PathBuf {
    o.output_dir.clone().unwrap_or_else(|| PathBuf::from("runs"))
}

/// The directory a new run writes to: `--run-dir` when given, otherwise a
/// fresh timestamped directory under the output directory.
pub fn create(o: &Options) -> Result<PathBuf, CliError> {
    if let Some(dir) = &o.run_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        return Ok(dir.clone());
    }
    let parent = output_dir(o);
    fs::create_dir_all(&parent).map_err(|e| CliError::io(&parent, e))?;
    let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%SZ").to_string();
    for n in 0u32.. {
        let name = if n == 0 { stamp.clone() } else { format!("{stamp}-{n}") };
        let dir = parent.join(name);
        match fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(CliError::io(&dir, e)),
        }
    }
    unreachable!("run directory names are unbounded")
}

/// The run a later stage works on: `--run-dir`, or the most recent
/// timestamped directory under the output directory.
pub fn existing(o: &Options) -> Result<PathBuf, CliError> {
    if let Some(dir) = &o.run_dir {
        if !dir.is_dir() {
            return Err(CliError::Config(format!("run directory {} does not exist", dir.display())));
        }
        return Ok(dir.clone());
    }
    let parent = output_dir(o);
    let entries = fs::read_dir(&parent).map_err(|e| CliError::io(&parent, e))?;
    let mut dirs: Vec<PathBuf> = entries.filter_map(|e| e.ok()).map(|e| e.path()).filter(|p| p.is_dir()).collect();
    dirs.sort();
    dirs.pop().ok_or_else(|| CliError::Config(format!("no run directory under {}", parent.display())))
}

pub fn read(dir: &Path, name: &str) -> Result<String, CliError> {
    let path = dir.join(name);
    fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))
}

/// Writes through a temporary file so readers never see partial output.
pub fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, contents).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, &path).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

pub fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("artifacts serialize");
    text.push('\n');
    write(dir, name, &text)
}
