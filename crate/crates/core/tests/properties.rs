//! Property tests against brute-force oracles.

mod common;

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use common::*;
use kgraph_core::alignment::{is_exhaustive, mce, vee, Exhaustiveness};
use kgraph_core::aperiodicity::{aperiodicity_report, find_separating_extension, ReportOptions};
use kgraph_core::boundary::{aperiodicity_window_check, finite_boundary_paths, thue_morse, BoundaryPath, WindowCheck};
use kgraph_core::degree::graded_cmp;
use kgraph_core::graph::{make_omega, EdgeId, KGraph, Path};
use kgraph_core::repalg::formal::random_gaussian_element;
use kgraph_core::repalg::{
    build_boundary_family, build_fock_family, diagonal_norm, operator_norm, FormalElement, IsometryFamily,
};
use kgraph_core::{Degree, Execution};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::sample::Index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Fixture {
    g: Arc<KGraph>,
    paths: Vec<Path>,
}

fn fixtures() -> &'static [Fixture] {
    static F: OnceLock<Vec<Fixture>> = OnceLock::new();
    F.get_or_init(|| {
        CORPUS
            .iter()
            .map(|name| {
                let g = corpus(name);
                let cap = Degree::splat(g.rank(), if g.rank() > 2 { 2 } else { 3 });
                let mut paths = g.paths_up_to(&cap, None, None);
                paths.sort();
                Fixture { g, paths }
            })
            .collect()
    })
}

fn fixture(i: Index) -> &'static Fixture {
    i.get(fixtures())
}

fn thue_morse_fixture() -> &'static (Arc<KGraph>, BoundaryPath) {
    static T: OnceLock<(Arc<KGraph>, BoundaryPath)> = OnceLock::new();
    T.get_or_init(|| {
        let g = corpus("bouquet2");
        let x = thue_morse(&g).unwrap();
        (g, x)
    })
}

fn color(g: &KGraph, e: EdgeId) -> usize {
    g.edge(e).color
}

/// Swaps the pair at `i` through its commuting square.
fn swap(g: &KGraph, w: &mut [EdgeId], i: usize) {
    let pair = (w[i], w[i + 1]);
    let (x, y) = if color(g, pair.0) < color(g, pair.1) {
        g.square_below(pair).expect("top of a square")
    } else {
        g.square_above(pair).expect("bottom of a square")
    };
    w[i] = x;
    w[i + 1] = y;
}

fn closure_oracle(g: &KGraph, f: &[Path]) -> BTreeSet<Path> {
    let mut s: BTreeSet<Path> = f.iter().cloned().collect();
    loop {
        let items: Vec<Path> = s.iter().cloned().collect();
        let before = s.len();
        for a in &items {
            for b in &items {
                s.extend(mce_oracle(g, a, b));
            }
        }
        if s.len() == before {
            return s;
        }
    }
}

fn passes(c: WindowCheck) -> bool {
    matches!(c, WindowCheck::Pass { .. })
}

fn word_path(g: &KGraph, x: &BoundaryPath, n: &Degree, m: &Degree) -> Path {
    x.window(n, m).unwrap_or_else(|e| panic!("{e} on {}", g.path_name(&x.head(n))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn factorization_round_trip(gi: Index, pi: Index, ni: Index, mi: Index) {
        let Fixture { g, paths } = fixture(gi);
        let l = pi.get(paths);
        let n = ni.get(&l.degree().down_set()).clone();
        let m = mi.get(&n.down_set()).clone();
        let a = g.segment(l, &Degree::zero(g.rank()), &m).unwrap();
        let b = g.segment(l, &m, &n).unwrap();
        let c = g.segment(l, &n, l.degree()).unwrap();
        let back = g.compose(&a, &g.compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(&back, l);
        let ab = g.compose(&a, &b).unwrap();
        prop_assert_eq!(ab.degree(), &a.degree().add(b.degree()));
        prop_assert_eq!(g.factor(l, &m).unwrap(), (a, g.compose(&b, &c).unwrap()));
    }

    #[test]
    fn canonical_words_are_fixed(gi: Index, pi: Index) {
        let Fixture { g, paths } = fixture(gi);
        let l = pi.get(paths);
        if !l.is_vertex() {
            prop_assert_eq!(&g.path_from_word(l.word()).unwrap(), l);
            prop_assert!(l.word().windows(2).all(|w| color(g, w[0]) <= color(g, w[1])));
        }
    }

    #[test]
    fn every_rewriting_order_reaches_the_normal_form(gi: Index, pi: Index, swaps in prop::collection::vec(any::<Index>(), 0..12), picks in prop::collection::vec(any::<Index>(), 64)) {
        let Fixture { g, paths } = fixture(gi);
        let l = pi.get(paths);
        if l.len() < 2 {
            return Ok(());
        }
        let mut w = l.word().to_vec();
        for s in &swaps {
            let i = s.index(w.len() - 1);
            if color(g, w[i]) != color(g, w[i + 1]) {
                swap(g, &mut w, i);
            }
        }
        prop_assert_eq!(&g.path_from_word(&w).unwrap(), l);
        let mut k = 0;
        loop {
            let out_of_order: Vec<usize> = (0..w.len() - 1).filter(|&i| color(g, w[i]) > color(g, w[i + 1])).collect();
            if out_of_order.is_empty() {
                break;
            }
            swap(g, &mut w, *picks[k % picks.len()].get(&out_of_order));
            k += 1;
        }
        prop_assert_eq!(w.as_slice(), l.word());
    }

    #[test]
    fn mce_matches_oracle_and_is_symmetric(gi: Index, a: Index, b: Index) {
        let Fixture { g, paths } = fixture(gi);
        let (mu, nu) = (a.get(paths), b.get(paths));
        let m = mce(g, mu, nu);
        prop_assert_eq!(&m, &mce_oracle(g, mu, nu));
        prop_assert_eq!(&m, &mce(g, nu, mu));
    }

    #[test]
    fn vee_is_monotone_and_matches_closure(gi: Index, small in prop::collection::vec(any::<Index>(), 1..4), extra in prop::collection::vec(any::<Index>(), 0..3)) {
        let Fixture { g, paths } = fixture(gi);
        let f: Vec<Path> = small.iter().map(|i| i.get(paths).clone()).collect();
        let mut bigger = f.clone();
        bigger.extend(extra.iter().map(|i| i.get(paths).clone()));
        let (vf, vb) = (vee(g, &f), vee(g, &bigger));
        let sf: BTreeSet<Path> = vf.iter().cloned().collect();
        let sb: BTreeSet<Path> = vb.iter().cloned().collect();
        prop_assert!(sf.is_subset(&sb));
        prop_assert_eq!(sf, closure_oracle(g, &f));
    }

    #[test]
    fn exhaustive_matches_oracle(gi: Index, vi: Index, picks in prop::collection::vec(any::<Index>(), 1..5)) {
        let Fixture { g, .. } = fixture(gi);
        let vertices: Vec<_> = g.vertices().collect();
        let v = *vi.get(&vertices);
        let pool = g.paths_up_to(&Degree::splat(g.rank(), 2), Some(v), None);
        let e: Vec<Path> = picks.iter().map(|i| i.get(&pool).clone()).collect();
        let want = exhaustive_oracle(g, v, &e);
        match is_exhaustive(g, v, &e).unwrap() {
            Exhaustiveness::Exhaustive => prop_assert!(want.is_none()),
            Exhaustiveness::Failing { witness } => {
                prop_assert!(want.is_some());
                prop_assert!(e.iter().all(|l| mce_oracle(g, &witness, l).is_empty()));
            }
        }
    }

    #[test]
    fn separating_extensions_verify_and_persist(gi: Index, a: Index, b: Index) {
        let Fixture { g, paths } = fixture(gi);
        let (mu, nu) = (a.get(paths), b.get(paths));
        if mu == nu || mu.source() != nu.source() {
            return Ok(());
        }
        let depth = Degree::splat(g.rank(), 2);
        if let Some(tau) = find_separating_extension(g, mu, nu, &depth).unwrap() {
            let (x, y) = (g.compose(mu, &tau).unwrap(), g.compose(nu, &tau).unwrap());
            prop_assert!(mce_oracle(g, &x, &y).is_empty());
            let deeper = find_separating_extension(g, mu, nu, &Degree::splat(g.rank(), 3)).unwrap();
            prop_assert!(deeper.is_some());
        }
    }

    #[test]
    fn windows_factor_consistently(n in 0u32..40, m in 0u32..40, p in 0u32..40, shift in 0u32..8, prefix: Index) {
        let (g, tm) = thue_morse_fixture();
        let mut v = [n, m, p];
        v.sort();
        let [n, m, p] = v.map(|c| Degree::from_coords(vec![c]));
        let lambda = prefix.get(&g.paths_up_to(&Degree::from_coords(vec![2]), None, None)).clone();
        for x in [tm.clone(), tm.shift(&Degree::from_coords(vec![shift])).unwrap(), tm.extend(&lambda).unwrap()] {
            let whole = word_path(g, &x, &n, &p);
            let split = g.compose(&word_path(g, &x, &n, &m), &word_path(g, &x, &m, &p)).unwrap();
            prop_assert_eq!(&whole, &split);
            prop_assert_eq!(whole.range(), word_path(g, &x, &Degree::zero(1), &n).source());
        }
        let sx = tm.extend(&lambda).unwrap().shift(lambda.degree()).unwrap();
        prop_assert!(sx.window_eq(tm, &Degree::from_coords(vec![64])));
    }

    #[test]
    fn shifts_and_extensions_keep_window_aperiodicity(s in 0u32..8, m in 0u32..8, prefix: Index) {
        let (g, tm) = thue_morse_fixture();
        let w = Degree::from_coords(vec![64]);
        let bound = Degree::from_coords(vec![s]);
        prop_assert!(passes(aperiodicity_window_check(tm, &bound, &w)));
        let m = m.min(s);
        let shifted = tm.shift(&Degree::from_coords(vec![m])).unwrap();
        let rest = Degree::from_coords(vec![s - m]);
        prop_assert!(passes(aperiodicity_window_check(&shifted, &rest, &w)));
        let lambda = prefix.get(&g.paths_up_to(&Degree::from_coords(vec![3]), None, None)).clone();
        let extended = tm.extend(&lambda).unwrap();
        let longer = bound.add(lambda.degree());
        prop_assert!(passes(aperiodicity_window_check(&extended, &longer, &w)));
    }
}

fn fock_bouquet() -> &'static IsometryFamily {
    static F: OnceLock<IsometryFamily> = OnceLock::new();
    F.get_or_init(|| build_fock_family(&corpus("bouquet2"), &d(&[4])).unwrap())
}

fn omega_boundary() -> &'static IsometryFamily {
    static F: OnceLock<IsometryFamily> = OnceLock::new();
    F.get_or_init(|| {
        let g = corpus("omega22");
        build_boundary_family(&g, &finite_boundary_paths(&g).unwrap(), &d(&[2, 2]), 4).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn expectation_and_adjoint_laws(seed: u64, which: bool) {
        let fam = if which { fock_bouquet() } else { omega_boundary() };
        let g = fam.graph();
        let support = g.paths_up_to(&Degree::splat(g.rank(), 2), None, None);
        let a = random_gaussian_element(g, &support, 10, 5, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(a.diagonal().diagonal(), a.diagonal());
        prop_assert_eq!(a.adjoint().adjoint(), a.clone());
        prop_assert_eq!(a.adjoint().evaluate(fam).unwrap(), a.evaluate(fam).unwrap().adjoint());
        let m = a.evaluate(fam).unwrap();
        let mm = m.adjoint().mul(&m);
        prop_assert!((0..fam.dim()).all(|i| mm.get(i, i).re >= 0 && mm.get(i, i).im == 0));
    }

    #[test]
    fn diagonal_norm_matches_numeric_norm(seed: u64, which: bool) {
        use rand::Rng;
        let fam = if which { fock_bouquet() } else { omega_boundary() };
        let g = fam.graph();
        let support = g.paths_up_to(&Degree::splat(g.rank(), 1), None, None);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = FormalElement::new();
        for l in &support {
            if rng.random_bool(0.6) {
                let c = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                a.add_term(g, l.clone(), l.clone(), c).unwrap();
            }
        }
        let formula = diagonal_norm(fam, &a.diagonal_coefficients()).unwrap();
        let numeric = operator_norm(&a.evaluate(fam).unwrap(), 1e-13).unwrap();
        prop_assert!((formula - numeric).abs() < 1e-10, "{} vs {}", formula, numeric);
    }

    #[test]
    fn degree_order_laws(a in prop::collection::vec(0u32..5, 3), b in prop::collection::vec(0u32..5, 3)) {
        let (a, b) = (Degree::from_coords(a), Degree::from_coords(b));
        let (j, m) = (a.join(&b), a.meet(&b));
        prop_assert!(a.le(&j) && b.le(&j) && m.le(&a) && m.le(&b));
        prop_assert_eq!(j.add(&m), a.add(&b));
        prop_assert_eq!(a.le(&b), b.down_set().contains(&a));
        prop_assert_eq!(graded_cmp(&a, &b), graded_cmp(&b, &a).reverse());
        prop_assert_eq!(graded_cmp(&a, &b) == std::cmp::Ordering::Equal, a == b);
    }
}

#[test]
fn omega_paths_are_unique_between_comparable_vertices() {
    for (k, m) in [(2, d(&[2, 2])), (3, d(&[1, 2, 1])), (1, d(&[3]))] {
        let g = make_omega(k, &m);
        let coord = |p: &Path| g.vertex_name(p.range()).to_string();
        for top in g.paths_up_to(&m, None, None).iter().filter(|p| p.is_vertex()) {
            let from = top.range();
            let all = g.paths_up_to(&m, Some(from), None);
            let targets: BTreeSet<_> = all.iter().map(|p| p.source()).collect();
            for t in targets {
                let n = all.iter().filter(|p| p.source() == t).count();
                assert_eq!(n, 1, "{} paths from {} to {}", n, coord(top), g.vertex_name(t));
            }
        }
    }
}

#[test]
fn aperiodicity_reports_are_reproducible() {
    for name in CORPUS {
        let g = corpus(name);
        let bound = Degree::splat(g.rank(), 2);
        let run = |exec| {
            let r =
                aperiodicity_report(&g, &bound, &bound, ReportOptions { exec, ..ReportOptions::default() }).unwrap();
            serde_json::to_string(&r.to_json(&g)).unwrap()
        };
        let first = run(Execution::Parallel);
        assert_eq!(first, run(Execution::Parallel));
        assert_eq!(first, run(Execution::Sequential));
    }
}
