//! Brute-force reference implementations. They enumerate whole degree
//! classes and share no logic with the fast paths beyond prefix tests.

use std::collections::BTreeSet;

use crate::degree::Degree;
use crate::graph::{KGraph, Path, VertexId};

/// All paths of degree `d(μ) ∨ d(ν)` at `r(μ)` having both as prefixes.
pub fn mce_brute(g: &KGraph, mu: &Path, nu: &Path) -> Vec<Path> {
    mce_set_brute(g, &[mu.clone(), nu.clone()])
}

pub fn mce_set_brute(g: &KGraph, family: &[Path]) -> Vec<Path> {
    let Some(first) = family.first() else {
        return Vec::new();
    };
    if family.iter().any(|p| p.range() != first.range()) {
        return Vec::new();
    }
    let join = family.iter().fold(Degree::zero(g.rank()), |acc, p| acc.join(p.degree()));
    let mut out: Vec<Path> = g
        .paths_of_degree(&join, Some(first.range()), None)
        .into_iter()
        .filter(|lambda| family.iter().all(|p| g.has_prefix(lambda, p)))
        .collect();
    out.sort();
    out
}

/// `∨F` by enumerating every nonempty subset. Only for small `F`.
pub fn vee_brute(g: &KGraph, family: &[Path]) -> Vec<Path> {
    assert!(family.len() <= 16, "subset enumeration is exponential");
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << family.len()) {
        let subset: Vec<Path> = (0..family.len()).filter(|i| mask >> i & 1 == 1).map(|i| family[i].clone()).collect();
        out.extend(mce_set_brute(g, &subset));
    }
    out.into_iter().collect()
}

/// Returns the first `μ ∈ vΛ` with `d(μ) <= D + (1,...,1)` that has no common
/// extension with any member of `E`, or `None`.
pub fn exhaustive_brute(g: &KGraph, v: VertexId, e: &[Path]) -> Option<Path> {
    let bound = e.iter().fold(Degree::zero(g.rank()), |acc, l| acc.join(l.degree())).add(&Degree::splat(g.rank(), 1));
    g.paths_up_to(&bound, Some(v), None).into_iter().find(|mu| e.iter().all(|l| mce_brute(g, mu, l).is_empty()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::{mce, vee};
    use crate::graph::{make_bouquet, make_flip};

    #[test]
    fn oracle_matches_fast_path_on_flip() {
        let g = make_flip();
        let paths = g.paths_up_to(&Degree::from_coords(vec![2, 2]), None, None);
        for mu in &paths {
            for nu in &paths {
                assert_eq!(mce(&g, mu, nu), mce_brute(&g, mu, nu));
            }
        }
    }

    #[test]
    fn vee_oracle() {
        let g = make_bouquet(2);
        let f: Vec<Path> = ["v", "a", "ab", "b"].iter().map(|s| g.parse_path(s).unwrap()).collect();
        assert_eq!(vee(&g, &f), vee_brute(&g, &f));
    }
}
