//! Replays the checked-in fuzz corpora through the same checks as the fuzz
//! targets, so that stable toolchains exercise them too.

use std::fs;
use std::path::Path;

use acx::problem::{parse_problem, render_problem};
use acx::prover::{prove, ProveOptions};

fn corpus(target: &str) -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let path = e.unwrap().path();
            let text = String::from_utf8_lossy(&fs::read(&path).unwrap()).into_owned();
            (path.display().to_string(), text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "empty corpus {}", dir.display());
    out
}

#[test]
fn parse_problem_corpus() {
    for (_, text) in corpus("parse_problem") {
        let _ = parse_problem(&text);
    }
}

#[test]
fn roundtrip_corpus() {
    for (name, text) in corpus("roundtrip") {
        let p = parse_problem(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let rendered = render_problem(&p);
        assert_eq!(parse_problem(&rendered).unwrap(), p, "{name}");
    }
}

#[test]
fn prove_small_corpus() {
    let opts = ProveOptions {
        budget: 2000,
        ..Default::default()
    };
    for (name, text) in corpus("prove_small") {
        let p = parse_problem(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        prove(&p, &opts).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}
