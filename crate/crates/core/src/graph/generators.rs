//! Standard presentations used throughout the tests and the corpus.

use super::{EdgeSpec, KGraph, Presentation, SquareSpec};
use crate::degree::Degree;

fn valid(p: Presentation) -> KGraph {
    KGraph::validate(&p).expect("generated presentation is valid")
}

fn spec(name: String, color: usize, range: String, source: String) -> EdgeSpec {
    EdgeSpec { name, color, range, source }
}

/// `Ω_{k,m}`: vertices `p <= m`, one color-`i` edge `(p, p+e_i)` with range
/// `p` and source `p+e_i`. Vertices are named `(p1,...,pk)` and edges
/// `(p)-(p+e_i)`.
pub fn make_omega(k: usize, m: &Degree) -> KGraph {
    assert_eq!(m.rank(), k, "degree rank must equal k");
    let points = lex_points(m);
    let name = |p: &Degree| p.to_string();
    let edge_name = |p: &Degree, i: usize| format!("{}-{}", p, p.add(&Degree::unit(k, i)));
    let mut edges = Vec::new();
    let mut squares = Vec::new();
    for p in &points {
        for i in 0..k {
            let q = p.add(&Degree::unit(k, i));
            if q.le(m) {
                edges.push(spec(edge_name(p, i), i + 1, name(p), name(&q)));
            }
            for j in i + 1..k {
                let ei = Degree::unit(k, i);
                let ej = Degree::unit(k, j);
                if p.add(&ei).add(&ej).le(m) {
                    squares.push(SquareSpec {
                        top: [edge_name(p, i), edge_name(&p.add(&ei), j)],
                        bottom: [edge_name(p, j), edge_name(&p.add(&ej), i)],
                    });
                }
            }
        }
    }
    valid(Presentation { rank: k, vertices: points.iter().map(name).collect(), edges, squares })
}

fn lex_points(m: &Degree) -> Vec<Degree> {
    let mut out = vec![Vec::new()];
    for &c in m.coords() {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u32>| {
                (0..=c).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(Degree::from_coords).collect()
}

/// The cycle `C_n`: vertices `v0..`, edges `e_i` with range `v_i` and source `v_{i+1 mod n}`.
pub fn make_cycle(n: usize) -> KGraph {
    assert!(n >= 1, "cycle needs at least one vertex");
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges = (0..n).map(|i| spec(format!("e{i}"), 1, vertices[i].clone(), vertices[(i + 1) % n].clone())).collect();
    valid(Presentation { rank: 1, vertices, edges, squares: Vec::new() })
}

/// One vertex `v` with `loops` loops named `a`, `b`, ... (or `x26`, ... past `z`).
pub fn make_bouquet(loops: usize) -> KGraph {
    assert!(loops >= 1, "bouquet needs at least one loop");
    let edges = (0..loops)
        .map(|i| {
            let name = if i < 26 { char::from(b'a' + i as u8).to_string() } else { format!("x{i}") };
            spec(name, 1, "v".into(), "v".into())
        })
        .collect();
    valid(Presentation { rank: 1, vertices: vec!["v".into()], edges, squares: Vec::new() })
}

/// One vertex, blue loops `a`, `b`, red loop `f`, with `af = fb` and `bf = fa`.
pub fn make_flip() -> KGraph {
    let v = || "v".to_string();
    valid(Presentation {
        rank: 2,
        vertices: vec![v()],
        edges: vec![spec("a".into(), 1, v(), v()), spec("b".into(), 1, v(), v()), spec("f".into(), 2, v(), v())],
        squares: vec![
            SquareSpec { top: ["a".into(), "f".into()], bottom: ["f".into(), "b".into()] },
            SquareSpec { top: ["b".into(), "f".into()], bottom: ["f".into(), "a".into()] },
        ],
    })
}

/// Cartesian product `Λ1 × Λ2` of rank `k1 + k2`. Vertices are `(u,w)`;
/// edges `e|w` carry the colors of `Λ1` and `u|f` the shifted colors of `Λ2`.
pub fn make_product(g1: &KGraph, g2: &KGraph) -> KGraph {
    let k1 = g1.rank();
    let vname = |u: super::VertexId, w: super::VertexId| format!("({},{})", g1.vertex_name(u), g2.vertex_name(w));
    let left = |e: super::EdgeId, w: super::VertexId| format!("{}|{}", g1.edge(e).name, g2.vertex_name(w));
    let right = |u: super::VertexId, f: super::EdgeId| format!("{}|{}", g1.vertex_name(u), g2.edge(f).name);

    let mut vertices = Vec::new();
    for u in g1.vertices() {
        for w in g2.vertices() {
            vertices.push(vname(u, w));
        }
    }
    let e1: Vec<_> = (0..g1.edge_count() as u32).map(super::EdgeId).collect();
    let e2: Vec<_> = (0..g2.edge_count() as u32).map(super::EdgeId).collect();
    let mut edges = Vec::new();
    for &e in &e1 {
        let ed = g1.edge(e);
        for w in g2.vertices() {
            edges.push(spec(left(e, w), ed.color + 1, vname(ed.range, w), vname(ed.source, w)));
        }
    }
    for u in g1.vertices() {
        for &f in &e2 {
            let fd = g2.edge(f);
            edges.push(spec(right(u, f), k1 + fd.color + 1, vname(u, fd.range), vname(u, fd.source)));
        }
    }

    let mut squares = Vec::new();
    let p1 = g1.to_presentation();
    let p2 = g2.to_presentation();
    for sq in &p1.squares {
        for w in g2.vertices() {
            let n = |s: &String| format!("{}|{}", s, g2.vertex_name(w));
            squares
                .push(SquareSpec { top: [n(&sq.top[0]), n(&sq.top[1])], bottom: [n(&sq.bottom[0]), n(&sq.bottom[1])] });
        }
    }
    for u in g1.vertices() {
        for sq in &p2.squares {
            let n = |s: &String| format!("{}|{}", g1.vertex_name(u), s);
            squares
                .push(SquareSpec { top: [n(&sq.top[0]), n(&sq.top[1])], bottom: [n(&sq.bottom[0]), n(&sq.bottom[1])] });
        }
    }
    for &e in &e1 {
        let ed = g1.edge(e);
        for &f in &e2 {
            let fd = g2.edge(f);
            squares.push(SquareSpec {
                top: [left(e, fd.range), right(ed.source, f)],
                bottom: [right(ed.range, f), left(e, fd.source)],
            });
        }
    }
    valid(Presentation { rank: k1 + g2.rank(), vertices, edges, squares })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_sizes() {
        let d = |c: &[u32]| Degree::from_coords(c.to_vec());
        let o = make_omega(1, &d(&[3]));
        assert_eq!((o.vertex_count(), o.edge_count()), (4, 3));
        let o = make_omega(2, &d(&[2, 2]));
        assert_eq!((o.vertex_count(), o.edge_count(), o.square_count()), (9, 12, 4));
        assert_eq!(o.edges_per_color(), vec![6, 6]);
        let o = make_omega(2, &d(&[1, 1]));
        assert_eq!((o.vertex_count(), o.edge_count(), o.square_count()), (4, 4, 1));
    }

    #[test]
    fn small_generators() {
        assert_eq!(make_cycle(3).edge_count(), 3);
        let c1 = make_cycle(1);
        assert_eq!((c1.vertex_count(), c1.edge_count()), (1, 1));
        assert_eq!(make_bouquet(2).edge_by_name("b").map(|e| e.0), Some(1));
    }

    #[test]
    fn omega_product_is_a_three_graph() {
        let d = |c: &[u32]| Degree::from_coords(c.to_vec());
        let g = make_product(&make_omega(1, &d(&[2])), &make_omega(2, &d(&[2, 2])));
        assert_eq!(g.rank(), 3);
        assert_eq!(g.vertex_count(), 27);
        assert!(g.has_finitely_many_paths());
        let origin = g.vertices().next();
        assert_eq!(g.paths_of_degree(&d(&[2, 2, 2]), origin, None).len(), 1);
    }
}
