//! Brute-force oracles shared by the integration tests. They only use path
//! enumeration and composition, never the alignment routines under test.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use kgraph_core::degree::Degree;
use kgraph_core::graph::{KGraph, Path, VertexId};

pub const CORPUS: [&str; 5] = ["c3", "bouquet2", "flip", "omega22", "omega_product3"];

pub fn corpus_path(file: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(file)
}

pub fn corpus(name: &str) -> Arc<KGraph> {
    let text = std::fs::read_to_string(corpus_path(&format!("{name}.kg"))).expect("corpus file");
    Arc::new(KGraph::from_json(&text).expect("corpus graph validates"))
}

pub fn d(c: &[u32]) -> Degree {
    Degree::from_coords(c.to_vec())
}

pub fn p(g: &KGraph, text: &str) -> Path {
    g.parse_path(text).expect("path")
}

/// All `μα` with `d(μα) = n`.
pub fn extensions_to(g: &KGraph, mu: &Path, n: &Degree) -> BTreeSet<Path> {
    let Some(rest) = n.checked_sub(mu.degree()) else { return BTreeSet::new() };
    g.paths_of_degree(&rest, Some(mu.source()), None).iter().map(|a| g.compose(mu, a).expect("composable")).collect()
}

/// Minimal common extensions as the intersection of the two extension sets
/// at degree `d(μ) ∨ d(ν)`.
pub fn mce_oracle(g: &KGraph, mu: &Path, nu: &Path) -> Vec<Path> {
    if mu.range() != nu.range() {
        return Vec::new();
    }
    let n = mu.degree().join(nu.degree());
    extensions_to(g, mu, &n).intersection(&extensions_to(g, nu, &n)).cloned().collect()
}

/// A path from `v` of degree at most `∨d(E) + 1` meeting no member of `E`.
pub fn exhaustive_oracle(g: &KGraph, v: VertexId, e: &[Path]) -> Option<Path> {
    let top = e.iter().fold(Degree::zero(g.rank()), |acc, l| acc.join(l.degree()));
    let bound = top.add(&Degree::splat(g.rank(), 1));
    let mut candidates = g.paths_up_to(&bound, Some(v), None);
    candidates.sort();
    candidates.into_iter().find(|mu| e.iter().all(|l| mce_oracle(g, mu, l).is_empty()))
}

/// The first `n` letters of the Thue-Morse word over `a`, `b`.
pub fn thue_morse_word(n: usize) -> String {
    (0..n).map(|i| if (i as u32).count_ones().is_multiple_of(2) { 'a' } else { 'b' }).collect()
}
