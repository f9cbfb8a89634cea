//! Writes the bundled fixture sets by running the real command line against
//! the synthetic agent with the recording backend.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use kgforge_core::corpus::Corpus;
use kgforge_core::ontology::ontology_to_graph;
use kgforge_core::rdf::serialize_turtle;

use crate::agent::SyntheticAgent;
use crate::{paper_scale, scenarios};

/// Products in the end-to-end corpus.
pub const E2E_PRODUCTS: usize = 20;

/// Artifacts of the end-to-end run kept as goldens.
pub const E2E_GOLDENS: [&str; 6] =
    ["ontology.ttl", "ontology.refined.ttl", "kg.ttl", "trace.json", "results.json", "report.json"];

pub const E2E_CONFIG: &str = "# End-to-end fixture run: replays the recorded agent responses in agents/.
corpus = \"corpus.jsonl\"
category = \"air conditioners\"
namespace = \"http://example.org/ac#\"
product_base = \"http://example.org/product/\"
backend = \"replay\"
fixtures_dir = \"agents\"
seed = 42
batch_size = 5
sample_budget = 30
plateau_window = 2
plateau_threshold = 2
max_attempts = 3
max_inflight = 4
";

/// The repository's `fixtures/` directory.
pub fn workspace_fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn corpus_of(agent: &SyntheticAgent) -> String {
    let records = agent.products.values().map(|p| p.record.clone()).collect();
    Corpus::from_records(records).expect("unique ids").to_jsonl()
}

fn fresh_dir(dir: &Path) -> io::Result<()> {
    if dir.exists() {
        fs::remove_dir_all(dir)?;
    }
    fs::create_dir_all(dir)
}

/// Runs the command line in-process with `agent` as the live model.
pub fn run_cli(args: &[&str], agent: SyntheticAgent) -> (i32, String) {
    let mut out = Vec::new();
    let mut argv = vec!["kgforge"];
    argv.extend_from_slice(args);
    let code = kgforge_cli::run_with(argv, Some(agent.backend()), &mut out);
    (code, String::from_utf8(out).expect("utf-8 output"))
}

fn other(msg: String) -> io::Error {
    io::Error::other(msg)
}

/// `root/e2e`: corpus, config, recorded agent responses and golden outputs.
pub fn write_e2e(root: &Path) -> io::Result<()> {
    let dir = root.join("e2e");
    fresh_dir(&dir)?;
    let agent = scenarios::ac_agent(E2E_PRODUCTS);
    fs::write(dir.join("corpus.jsonl"), corpus_of(&agent))?;
    fs::write(dir.join("kgforge.toml"), E2E_CONFIG)?;
    let run = tempfile_dir(&dir, "run")?;
    let config = dir.join("kgforge.toml");
    let (code, out) = run_cli(
        &["--config", path(&config), "--backend", "record", "--run-dir", path(&run), "--format", "json", "run-all"],
        agent,
    );
    if code != 0 {
        return Err(other(format!("end-to-end recording exited with {code}: {out}")));
    }
    let golden = dir.join("golden");
    fs::create_dir_all(&golden)?;
    for name in E2E_GOLDENS {
        fs::copy(run.join(name), golden.join(name))?;
    }
    fs::remove_dir_all(&run)
}

fn tempfile_dir(parent: &Path, name: &str) -> io::Result<PathBuf> {
    let dir = parent.join(format!(".{name}"));
    fresh_dir(&dir)?;
    Ok(dir)
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// `root/refine`: an input ontology and one recorded refinement per case.
pub fn write_refine(root: &Path) -> io::Result<()> {
    let dir = root.join("refine");
    fresh_dir(&dir)?;
    let input = serialize_turtle(&ontology_to_graph(&scenarios::ac_base_ontology()));
    fs::write(dir.join("ontology.ttl"), &input)?;
    let cases: [(&str, SyntheticAgent, i32); 3] = [
        ("identity", SyntheticAgent::new(scenarios::ac_schema(), Vec::new()), 0),
        ("split", scenarios::refine_split_agent(), 0),
        ("drop", scenarios::refine_drop_agent(), 3),
    ];
    for (name, agent, expected) in cases {
        let run = tempfile_dir(&dir, name)?;
        fs::write(run.join("ontology.ttl"), &input)?;
        let agents = dir.join(name).join("agents");
        let (code, out) = run_cli(
            &["--backend", "record", "--fixtures-dir", path(&agents), "--run-dir", path(&run), "ontology", "refine"],
            agent,
        );
        if code != expected {
            return Err(other(format!("refine case {name} exited with {code}, expected {expected}: {out}")));
        }
        fs::remove_dir_all(&run)?;
    }
    Ok(())
}

/// `root/conformance`: a schema and instance data violating it once per code.
pub fn write_conformance(root: &Path) -> io::Result<()> {
    let dir = root.join("conformance");
    fresh_dir(&dir)?;
    fs::write(dir.join("ontology.ttl"), serialize_turtle(&ontology_to_graph(&scenarios::ac_schema())))?;
    fs::write(dir.join("adversarial.ttl"), scenarios::ADVERSARIAL_TTL)
}

/// `root/paper-scale`: the 42-class ontology and the 291-product corpus.
/// Agent responses for this set are recorded at test time.
pub fn write_paper_scale(root: &Path) -> io::Result<()> {
    let dir = root.join("paper-scale");
    fresh_dir(&dir)?;
    fs::write(dir.join("ontology.ttl"), serialize_turtle(&ontology_to_graph(&paper_scale::ontology())))?;
    fs::write(dir.join("corpus.jsonl"), corpus_of(&paper_scale::agent()))
}

pub fn write_all(root: &Path) -> io::Result<()> {
    write_e2e(root)?;
    write_refine(root)?;
    write_conformance(root)?;
    write_paper_scale(root)
}
