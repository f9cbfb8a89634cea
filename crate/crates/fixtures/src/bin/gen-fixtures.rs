//! Regenerates the bundled fixture sets.
//!
//! Usage: gen-fixtures [FIXTURES_DIR]   (defaults to the repository's fixtures/)

use std::path::PathBuf;

fn main() {
    let root =
        std::env::args_os().nth(1).map(PathBuf::from).unwrap_or_else(kgforge_fixtures::generate::workspace_fixtures);
    if let Err(e) = kgforge_fixtures::generate::write_all(&root) {
        eprintln!("gen-fixtures: {e}");
        std::process::exit(1);
    }
    println!("fixtures written to {}", root.display());
}
