#![allow(dead_code)]

use std::path::PathBuf;

use icc_core::template::random_template;
use icc_core::{Digraph, IccTemplate};

pub fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn fixture_digraph(name: &str) -> Digraph {
    Digraph::from_json(&fixture(name)).expect("fixture parses")
}

/// Deterministic random templates with `k` cycling through 1..=5 and at most
/// `max_n` vertices.
pub fn corpus(count: usize, max_n: usize) -> Vec<IccTemplate> {
    let mut out = Vec::with_capacity(count);
    let mut seed = 0u64;
    while out.len() < count {
        let k = 1 + (seed % 5) as usize;
        let max_len = match k {
            1 => 10,
            2 => 4,
            3 => 3,
            4 => 2,
            _ => 2,
        };
        let density = [0.0, 0.1, 0.25, 0.5][(seed / 5 % 4) as usize];
        let t = random_template(k, max_len, density, seed);
        seed += 1;
        if t.vertex_count() <= max_n {
            out.push(t);
        }
    }
    out
}
