//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails. Every tolerance is pinned below.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use kgforge_core::agent::{Gateway, ScriptedBackend, TemplateSet};
use kgforge_core::corpus::{Corpus, ProductRecord};
use kgforge_core::metrics::{format_percent, property_coverage};
use kgforge_core::ontology::{
    ontology_diff, ontology_from_graph, ontology_merge, ontology_stats, Ontology, OntologyClass, OntologyProperty,
    PropertyKind, Severity,
};
use kgforge_core::rdf::{parse_turtle, serialize_turtle, Graph, Iri, Literal, Triple};
use kgforge_core::stages::{
    expansion_loop, plateau_reached, validate_triples, ConformanceMode, ExpansionConfig, OntologyStageOptions,
    StopReason,
};
use kgforge_fixtures::generate::{run_cli, workspace_fixtures};
use kgforge_fixtures::random::{random_graph, random_ontology};
use kgforge_fixtures::{paper_scale, scenarios};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ROUND_TRIP_GRAPHS: usize = 1000;
const ROUND_TRIP_LIMIT: Duration = Duration::from_secs(10);
const MERGE_PAIRS: usize = 500;
const MERGE_LIMIT: Duration = Duration::from_secs(5);
const RATIO_TOLERANCE: f64 = 1e-12;
const PAPER_SCALE_LIMIT: Duration = Duration::from_secs(30);
const E2E_LIMIT: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    check(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(took)
}

fn fixtures(sub: &str) -> PathBuf {
    workspace_fixtures().join(sub)
}

fn s(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn kgforge_output(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_kgforge"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot start kgforge: {e}"))?;
    Ok((out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn kgforge(args: &[&str]) -> Result<i32, String> {
    Ok(kgforge_output(args)?.0)
}

fn read(path: &Path) -> Result<Vec<u8>, String> {
    fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_json(path: &Path) -> Result<serde_json::Value, String> {
    serde_json::from_slice(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn tempdir() -> Result<tempfile::TempDir, String> {
    tempfile::tempdir().map_err(|e| e.to_string())
}

fn turtle_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut triples = 0;
    for i in 0..ROUND_TRIP_GRAPHS {
        let g = random_graph(&mut rng);
        let text = serialize_turtle(&g);
        let back = parse_turtle(&text).map_err(|e| format!("graph {i}: {e}\n{text}"))?;
        check(back == g, || format!("graph {i} changed on round trip\n{text}"))?;
        triples += g.len();
    }
    let took = within(start, ROUND_TRIP_LIMIT)?;
    Ok(format!("{ROUND_TRIP_GRAPHS} graphs, {triples} triples, {took:.2?}"))
}

fn merge_monotonicity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..MERGE_PAIRS {
        let base = random_ontology(&mut rng);
        let delta = random_ontology(&mut rng);
        let (merged, _) = ontology_merge(&base, &delta);
        check(ontology_diff(&base, &merged).removed_count() == 0, || format!("pair {i}: merge removed an element"))?;
        for (iri, c) in &base.classes {
            let m = &merged.classes[iri];
            check(m.parents == c.parents, || format!("pair {i}: parents of {iri} changed"))?;
            annotations_kept(&c.label, &m.label, i, iri)?;
            annotations_kept(&c.comment, &m.comment, i, iri)?;
        }
        for (iri, p) in &base.properties {
            let m = &merged.properties[iri];
            check((m.kind, &m.domain, &m.range) == (p.kind, &p.domain, &p.range), || {
                format!("pair {i}: signature of {iri} changed")
            })?;
            annotations_kept(&p.label, &m.label, i, iri)?;
            annotations_kept(&p.comment, &m.comment, i, iri)?;
        }
        let (same, report) = ontology_merge(&base, &base);
        check(same == base && report.is_empty(), || format!("pair {i}: merge(O, O) != O"))?;
    }
    let took = within(start, MERGE_LIMIT)?;
    Ok(format!("{MERGE_PAIRS} pairs, {took:.2?}"))
}

fn annotations_kept(before: &Option<String>, after: &Option<String>, i: usize, iri: &Iri) -> Result<(), String> {
    check(before.is_none() || before == after, || format!("pair {i}: annotation of {iri} overwritten"))
}

fn coverage_arithmetic() -> Outcome {
    let ns = "http://example.org/cov#";
    let mut o = Ontology::new(Iri::new(ns).unwrap());
    o.add_class(OntologyClass::new(Iri::new(format!("{ns}Thing")).unwrap()));
    let mut kg = Graph::new();
    let subject = Iri::new("http://example.org/product/x").unwrap();
    for i in 0..69 {
        let p = Iri::new(format!("{ns}p{i}")).unwrap();
        o.add_property(OntologyProperty::new(p.clone(), PropertyKind::Datatype));
        if i < 67 {
            kg.insert(Triple::new(subject.clone(), p, Literal::string(format!("v{i}"))));
        }
    }
    let cov = property_coverage(&kg, &o);
    let exact = 67.0 / 69.0;
    check((cov.instantiated, cov.total) == (67, 69), || format!("counted {}/{}", cov.instantiated, cov.total))?;
    check((cov.ratio - exact).abs() < RATIO_TOLERANCE, || format!("ratio {}", cov.ratio))?;
    let shown = format_percent(cov.instantiated, cov.total);
    check(shown == "97.1%", || format!("rendered {shown}"))?;
    Ok(format!("67/69 = {:.5}, rendered {shown}", cov.ratio))
}

fn failure_accounting() -> Outcome {
    let tmp = tempdir()?;
    let agents = tmp.path().join("agents");
    let corpus = fixtures("paper-scale/corpus.jsonl");
    let ontology = fixtures("paper-scale/ontology.ttl");
    let record_dir = tmp.path().join("record");
    let (code, out) = run_cli(
        &[
            "--corpus",
            s(&corpus),
            "--backend",
            "record",
            "--fixtures-dir",
            s(&agents),
            "--run-dir",
            s(&record_dir),
            "--paper-mode",
            "populate",
            "--ontology",
            s(&ontology),
        ],
        paper_scale::agent(),
    );
    check(code == 0, || format!("recording exited with {code}: {out}"))?;

    let start = Instant::now();
    let run = tmp.path().join("replay");
    let (code, stdout) = kgforge_output(&[
        "--corpus",
        s(&corpus),
        "--backend",
        "replay",
        "--fixtures-dir",
        s(&agents),
        "--run-dir",
        s(&run),
        "--paper-mode",
        "populate",
        "--ontology",
        s(&ontology),
    ])?;
    let took = within(start, PAPER_SCALE_LIMIT)?;
    check(code == 0, || format!("replay exited with {code}"))?;

    let report = read_json(&run.join("report.json"))?;
    let field = |k: &str| report[k].as_u64().unwrap_or(u64::MAX);
    let (ok, total) = (field("products_succeeded"), field("products_total"));
    check((ok, total) == (282, 291), || format!("succeeded {ok}/{total}"))?;
    let rate = report["failure_rate"].as_f64().unwrap_or(f64::NAN);
    check((rate - 9.0 / 291.0).abs() < RATIO_TOLERANCE, || format!("failure rate {rate}"))?;
    let shown = "failure rate: 3.1%";
    check(stdout.contains(shown), || format!("report does not show {shown:?}:\n{stdout}"))?;
    let triples = field("triples_total");
    check(triples == paper_scale::expected_triples() as u64, || format!("{triples} triples"))?;
    let (inst, props) = (field("properties_instantiated"), field("properties_total"));
    check((inst, props) == (67, 69), || format!("coverage {inst}/{props}"))?;
    Ok(format!("{ok}/{total} succeeded, failure rate {rate:.6} (3.1%), {triples} triples, replay {took:.2?}"))
}

fn end_to_end_determinism() -> Outcome {
    let start = Instant::now();
    let tmp = tempdir()?;
    let config = fixtures("e2e/kgforge.toml");
    let runs = [tmp.path().join("a"), tmp.path().join("b")];
    for run in &runs {
        let code = kgforge(&["--config", s(&config), "--run-dir", s(run), "run-all"])?;
        check(code == 0, || format!("run-all exited with {code}"))?;
        let code = kgforge(&["--config", s(&config), "--run-dir", s(run), "report"])?;
        check(code == 0, || format!("report exited with {code}"))?;
    }
    for name in ["ontology.ttl", "kg.ttl", "report.json"] {
        let (a, b) = (read(&runs[0].join(name))?, read(&runs[1].join(name))?);
        check(a == b, || format!("{name} differs between runs"))?;
        let golden = read(&fixtures("e2e/golden").join(name))?;
        check(a == golden, || format!("{name} differs from its golden"))?;
    }
    let took = within(start, E2E_LIMIT)?;
    Ok(format!("ontology.ttl, kg.ttl, report.json identical across 2 runs, {took:.2?}"))
}

/// Scripted agent whose n-th response (bootstrap first) declares
/// `cumulative(n)` classes, so each iteration adds the difference.
fn class_counting_gateway(cumulative: fn(usize) -> usize) -> Gateway {
    let calls = AtomicUsize::new(0);
    Gateway::new(Box::new(ScriptedBackend::new(move |_| {
        let n = calls.fetch_add(1, Ordering::SeqCst);
        let mut body = String::from(
            "```turtle\n@prefix ex: <http://example.org/plateau#> .\n\
             @prefix owl: <http://www.w3.org/2002/07/owl#> .\n\
             @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n",
        );
        for c in 0..cumulative(n) {
            body.push_str(&format!("ex:C{c} a owl:Class ; rdfs:label \"C{c}\" ; rdfs:comment \"class {c}\" .\n"));
        }
        body.push_str("```\n");
        Ok(body)
    })))
}

fn plateau_corpus() -> Corpus {
    let records = (0..40)
        .map(|i| ProductRecord {
            id: format!("P-{i}"),
            category: "widgets".into(),
            description: format!("Widget {i}."),
            source: None,
        })
        .collect();
    Corpus::from_records(records).expect("unique ids")
}

fn plateau_stopping() -> Outcome {
    check(plateau_reached(&[9, 4, 1, 0], 2, 2), || "[9, 4, 1, 0] not a plateau".into())?;
    check(!plateau_reached(&[9, 4, 1], 2, 2), || "[9, 4, 1] already a plateau".into())?;

    let corpus = plateau_corpus();
    let cfg = ExpansionConfig {
        batch_size: 5,
        sample_budget: 30,
        plateau_window: 2,
        plateau_threshold: 2,
        ..Default::default()
    };
    let opts = OntologyStageOptions {
        namespace: Iri::new("http://example.org/plateau#").unwrap(),
        category: "widgets".into(),
        max_attempts: 1,
    };
    let templates = TemplateSet::builtin();

    let gw = class_counting_gateway(|n| [9, 13, 14, 14].get(n).copied().unwrap_or(14));
    let (_, trace) = expansion_loop(&corpus, &cfg, &gw, &templates, &opts).map_err(|e| e.to_string())?;
    check(trace.yields() == [9, 4, 1, 0], || format!("yields {:?}", trace.yields()))?;
    check(trace.stop_reason == StopReason::Plateau, || format!("stopped by {:?}", trace.stop_reason))?;

    let gw = class_counting_gateway(|n| 3 * (n + 1));
    let (_, trace) = expansion_loop(&corpus, &cfg, &gw, &templates, &opts).map_err(|e| e.to_string())?;
    check(trace.iterations.len() == 6, || format!("{} iterations without plateau", trace.iterations.len()))?;
    check(trace.stop_reason == StopReason::BudgetExhausted, || format!("stopped by {:?}", trace.stop_reason))?;
    Ok("[9, 4, 1, 0] stops after 4 iterations; budget 30 / batch 5 runs 6".into())
}

fn conformance_soundness() -> Outcome {
    let schema = scenarios::ac_schema();
    let triples = scenarios::adversarial_triples();
    let issues = validate_triples(&triples, &schema, ConformanceMode::Lenient);
    let mut found = Vec::new();
    for (local, code) in scenarios::adversarial_expected() {
        let subject = format!("<http://example.org/product/{local}>");
        check(issues.iter().any(|i| i.code == code && i.triple.subject.to_string() == subject), || {
            format!("{code:?} not flagged on {subject}")
        })?;
        found.push(code);
    }

    // Strict population: the agent answers with the whole adversarial graph
    // for a product whose minted subject is `p:ok`.
    let tmp = tempdir()?;
    let corpus = tmp.path().join("corpus.jsonl");
    fs::write(
        &corpus,
        "{\"id\":\"ok\",\"category\":\"air conditioners\",\"description\":\"Split unit, 12000 BTU/h.\"}\n",
    )
    .map_err(|e| e.to_string())?;
    let run = tmp.path().join("run");
    let ontology = fixtures("conformance/ontology.ttl");
    let mut out = Vec::new();
    let reply = format!("```turtle\n{}```\n", scenarios::ADVERSARIAL_TTL);
    let code = kgforge_cli::run_with(
        ["kgforge", "--corpus", s(&corpus), "--run-dir", s(&run), "--strict", "populate", "--ontology", s(&ontology)],
        Some(Box::new(ScriptedBackend::new(move |_| Ok(reply.clone())))),
        &mut out,
    );
    check(code == 0, || format!("strict populate exited with {code}: {}", String::from_utf8_lossy(&out)))?;

    let strict = validate_triples(&triples, &schema, ConformanceMode::Strict);
    let errors: std::collections::BTreeSet<&Triple> =
        strict.iter().filter(|i| i.severity == Severity::Error).map(|i| &i.triple).collect();
    let expected: Graph = triples.iter().filter(|t| !errors.contains(t)).cloned().collect();
    let kg = parse_turtle(&String::from_utf8(read(&run.join("kg.ttl"))?).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    check(kg == expected, || {
        format!(
            "strict output differs from the input minus the Error triples:\n{}\n{}",
            serialize_turtle(&kg),
            serialize_turtle(&expected)
        )
    })?;
    let results = read_json(&run.join("results.json"))?;
    let dropped = results[0]["dropped"].as_array().map_or(0, Vec::len);
    check(dropped == errors.len(), || format!("{dropped} dropped, {} errors", errors.len()))?;
    Ok(format!("{}/5 codes flagged; strict removed {dropped} Error triples, kept {}", found.len(), kg.len()))
}

fn refinement_safety() -> Outcome {
    let input = fixtures("refine/ontology.ttl");
    let case = |name: &str| -> Result<(i32, tempfile::TempDir), String> {
        let tmp = tempdir()?;
        fs::copy(&input, tmp.path().join("ontology.ttl")).map_err(|e| e.to_string())?;
        let agents = fixtures("refine").join(name).join("agents");
        let code = kgforge(&[
            "--backend",
            "replay",
            "--fixtures-dir",
            s(&agents),
            "--run-dir",
            s(tmp.path()),
            "ontology",
            "refine",
        ])?;
        Ok((code, tmp))
    };

    let (code, dir) = case("drop")?;
    check(code == 3, || format!("drop exited with {code}"))?;
    check(read(&dir.path().join("ontology.ttl"))? == read(&input)?, || "drop altered ontology.ttl".into())?;
    check(!dir.path().join("ontology.refined.ttl").exists(), || "drop wrote a refined ontology".into())?;

    let (code, dir) = case("split")?;
    check(code == 0, || format!("split exited with {code}"))?;
    let report = read_json(&dir.path().join("refinement.json"))?;
    let diff = &report["diff"];
    let count = |k: &str| diff[k].as_array().map_or(0, Vec::len);
    let removed = count("removed_classes") + count("removed_properties");
    let added = count("added_classes") + count("added_properties");
    check((removed, added) == (1, 3), || format!("removed {removed}, added {added}"))?;
    let map = report["rename_map"].as_object().cloned().unwrap_or_default();
    let removed_iri = diff["removed_properties"][0].as_str().unwrap_or_default();
    let targets: Vec<&str> = map
        .get(removed_iri)
        .and_then(|v| v.as_array())
        .map_or(Vec::new(), |a| a.iter().filter_map(|t| t.as_str()).collect());
    let mut added_iris: Vec<&str> =
        diff["added_properties"].as_array().map_or(Vec::new(), |a| a.iter().filter_map(|t| t.as_str()).collect());
    added_iris.sort_unstable();
    let mut sorted = targets.clone();
    sorted.sort_unstable();
    check(map.len() == 1 && sorted == added_iris, || format!("rename_map {map:?}"))?;
    let unmapped = report["unmapped_removals"].as_array().map_or(0, Vec::len);
    check(unmapped == 0, || format!("{unmapped} unmapped removals"))?;
    Ok(format!("drop exits 3 unchanged; split removed 1 / added 3, {removed_iri} -> {} targets", targets.len()))
}

fn paper_scale_stats() -> Outcome {
    let path = fixtures("paper-scale/ontology.ttl");
    let text = String::from_utf8(read(&path)?).map_err(|e| e.to_string())?;
    let graph = parse_turtle(&text).map_err(|e| e.to_string())?;
    let (o, _) = ontology_from_graph(&graph).map_err(|e| e.to_string())?;
    let st = ontology_stats(&o);
    let got = (st.classes, st.properties, st.datatype_properties, st.object_properties);
    check(got == (42, 69, 20, 49), || format!("stats {got:?}"))?;
    Ok(format!("classes {}, properties {}, datatype {}, object {}", got.0, got.1, got.2, got.3))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("turtle round trip", turtle_round_trip),
        ("merge monotonicity", merge_monotonicity),
        ("coverage arithmetic", coverage_arithmetic),
        ("failure accounting", failure_accounting),
        ("end-to-end determinism", end_to_end_determinism),
        ("plateau stopping", plateau_stopping),
        ("conformance soundness", conformance_soundness),
        ("refinement safety", refinement_safety),
        ("paper-scale ontology stats", paper_scale_stats),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", n + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
