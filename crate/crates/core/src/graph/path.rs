//! Paths in canonical form, composition, segments and enumeration.

use std::cmp::Ordering;

use thiserror::Error;

use super::{EdgeId, KGraph, VertexId};
use crate::degree::{graded_cmp, Degree};

/// A morphism of the path category. The word is kept in canonical form: the
/// colors are non-decreasing from the range end, so two paths are equal iff
/// their words (and, for vertices, their endpoints) are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    range: VertexId,
    source: VertexId,
    degree: Degree,
    word: Vec<EdgeId>,
}

impl Path {
    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn word(&self) -> &[EdgeId] {
        &self.word
    }

    pub fn is_vertex(&self) -> bool {
        self.word.is_empty()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        graded_cmp(&self.degree, &other.degree)
            .then_with(|| self.range.cmp(&other.range))
            .then_with(|| self.word.cmp(&other.word))
            .then_with(|| self.source.cmp(&other.source))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("paths are not composable: source {left} differs from range {right}")]
    NotComposable { left: String, right: String },
    #[error("segment ({m}, {n}) is out of range for a path of degree {degree}")]
    DegreeOutOfRange { m: Degree, n: Degree, degree: Degree },
    #[error("unknown vertex or edge `{0}`")]
    UnknownName(String),
    #[error("empty path literal")]
    Empty,
    #[error("degree {0} has the wrong rank")]
    RankMismatch(Degree),
}

impl KGraph {
    pub fn vertex_path(&self, v: VertexId) -> Path {
        Path { range: v, source: v, degree: Degree::zero(self.rank), word: Vec::new() }
    }

    pub fn edge_path(&self, e: EdgeId) -> Path {
        let edge = self.edge(e);
        Path { range: edge.range, source: edge.source, degree: Degree::unit(self.rank, edge.color), word: vec![e] }
    }

    pub fn range_vertex(&self, p: &Path) -> Path {
        self.vertex_path(p.range)
    }

    pub fn source_vertex(&self, p: &Path) -> Path {
        self.vertex_path(p.source)
    }

    /// Builds the path of an arbitrary composable edge word.
    pub fn path_from_word(&self, word: &[EdgeId]) -> Result<Path, PathError> {
        let Some(&first) = word.first() else {
            return Err(PathError::Empty);
        };
        let mut degree = Degree::zero(self.rank);
        for (i, &e) in word.iter().enumerate() {
            degree = degree.add(&Degree::unit(self.rank, self.edge(e).color));
            if let Some(&next) = word.get(i + 1) {
                if self.edge(e).source != self.edge(next).range {
                    return Err(PathError::NotComposable {
                        left: self.edge(e).name.clone(),
                        right: self.edge(next).name.clone(),
                    });
                }
            }
        }
        let last = *word.last().unwrap();
        let word = self.reorder(word, &degree.color_sequence());
        Ok(Path { range: self.edge(first).range, source: self.edge(last).source, degree, word })
    }

    /// Rewrites a composable word into the unique word with the given color
    /// sequence, by moving the first edge of each wanted color leftwards one
    /// square at a time.
    fn reorder(&self, word: &[EdgeId], colors: &[usize]) -> Vec<EdgeId> {
        debug_assert_eq!(word.len(), colors.len());
        let mut w = word.to_vec();
        for (i, &c) in colors.iter().enumerate() {
            let j = (i..w.len()).find(|&j| self.edge(w[j]).color == c).expect("color multiset matches");
            for p in (i..j).rev() {
                let (x, y) = (w[p], w[p + 1]);
                let swapped = if self.edge(x).color < self.edge(y).color {
                    self.top_to_bottom[&(x, y)]
                } else {
                    self.bottom_to_top[&(x, y)]
                };
                w[p] = swapped.0;
                w[p + 1] = swapped.1;
            }
        }
        w
    }

    pub fn compose(&self, lambda: &Path, mu: &Path) -> Result<Path, PathError> {
        if lambda.source != mu.range {
            return Err(PathError::NotComposable {
                left: self.vertex_name(lambda.source).to_string(),
                right: self.vertex_name(mu.range).to_string(),
            });
        }
        if lambda.is_vertex() {
            return Ok(mu.clone());
        }
        if mu.is_vertex() {
            return Ok(lambda.clone());
        }
        let mut word = lambda.word.clone();
        word.extend_from_slice(&mu.word);
        let degree = lambda.degree.add(&mu.degree);
        // Insertion of the (already sorted) suffix into the sorted prefix.
        let word = self.reorder(&word, &degree.color_sequence());
        Ok(Path { range: lambda.range, source: mu.source, degree, word })
    }

    /// Splits `λ = λ(0,m) λ(m,d(λ))`.
    pub fn factor(&self, lambda: &Path, m: &Degree) -> Result<(Path, Path), PathError> {
        self.check_path_rank(m)?;
        let rest = lambda.degree.checked_sub(m).ok_or_else(|| PathError::DegreeOutOfRange {
            m: m.clone(),
            n: lambda.degree.clone(),
            degree: lambda.degree.clone(),
        })?;
        Ok(self.split_unchecked(lambda, m, &rest))
    }

    fn split_unchecked(&self, lambda: &Path, m: &Degree, rest: &Degree) -> (Path, Path) {
        let mut colors = m.color_sequence();
        let cut = colors.len();
        colors.extend(rest.color_sequence());
        let w = self.reorder(&lambda.word, &colors);
        let mid = if cut == 0 {
            lambda.range
        } else if cut == w.len() {
            lambda.source
        } else {
            self.edge(w[cut - 1]).source
        };
        let head = Path { range: lambda.range, source: mid, degree: m.clone(), word: w[..cut].to_vec() };
        let tail = Path { range: mid, source: lambda.source, degree: rest.clone(), word: w[cut..].to_vec() };
        (head, tail)
    }

    /// The segment `λ(m,n)` of degree `n - m`.
    pub fn segment(&self, lambda: &Path, m: &Degree, n: &Degree) -> Result<Path, PathError> {
        self.check_path_rank(m)?;
        self.check_path_rank(n)?;
        let out_of_range = || PathError::DegreeOutOfRange { m: m.clone(), n: n.clone(), degree: lambda.degree.clone() };
        let tail_degree = lambda.degree.checked_sub(n).ok_or_else(out_of_range)?;
        let mid_degree = n.checked_sub(m).ok_or_else(out_of_range)?;
        let (head, _) = self.split_unchecked(lambda, n, &tail_degree);
        let (_, mid) = self.split_unchecked(&head, m, &mid_degree);
        Ok(mid)
    }

    /// `λ(0, d(μ)) = μ`.
    pub fn has_prefix(&self, lambda: &Path, mu: &Path) -> bool {
        if lambda.range != mu.range || !mu.degree.le(&lambda.degree) {
            return false;
        }
        if mu.is_vertex() {
            return true;
        }
        let rest = lambda.degree.checked_sub(&mu.degree).unwrap();
        self.split_unchecked(lambda, &mu.degree, &rest).0 == *mu
    }

    fn check_path_rank(&self, d: &Degree) -> Result<(), PathError> {
        if d.rank() == self.rank {
            Ok(())
        } else {
            Err(PathError::RankMismatch(d.clone()))
        }
    }

    /// All paths of degree `n`, optionally restricted to a range (`from`) and
    /// a source (`to`). Ordered by range vertex, then by edge word.
    pub fn paths_of_degree(&self, n: &Degree, from: Option<VertexId>, to: Option<VertexId>) -> Vec<Path> {
        assert_eq!(n.rank(), self.rank, "degree rank must equal graph rank");
        let colors = n.color_sequence();
        let mut out = Vec::new();
        let starts: Vec<VertexId> = match from {
            Some(v) => vec![v],
            None => self.vertices().collect(),
        };
        let mut word = Vec::with_capacity(colors.len());
        for v in starts {
            self.extend_words(v, &colors, &mut word, &mut |w, s| {
                if to.is_none_or(|t| t == s) {
                    out.push(Path { range: v, source: s, degree: n.clone(), word: w.to_vec() });
                }
            });
        }
        out
    }

    fn extend_words(
        &self,
        at: VertexId,
        colors: &[usize],
        word: &mut Vec<EdgeId>,
        emit: &mut impl FnMut(&[EdgeId], VertexId),
    ) {
        if word.len() == colors.len() {
            emit(word, at);
            return;
        }
        for &e in self.edges_with_range(at, colors[word.len()]) {
            word.push(e);
            self.extend_words(self.edge(e).source, colors, word, emit);
            word.pop();
        }
    }

    /// All paths with degree `<= cap`, in the canonical [`Path`] order.
    pub fn paths_up_to(&self, cap: &Degree, from: Option<VertexId>, to: Option<VertexId>) -> Vec<Path> {
        cap.down_set().iter().flat_map(|d| self.paths_of_degree(d, from, to)).collect()
    }

    /// For a graph without cycles: the join of the degrees of all paths.
    /// `None` when some path can be extended forever.
    pub fn max_path_degree(&self) -> Option<Degree> {
        if !self.acyclic {
            return None;
        }
        let n = self.vertex_count();
        let coords = (0..self.rank)
            .map(|c| {
                // Longest color-c walk; memoized depth-first on the acyclic skeleton.
                let mut memo = vec![None; n];
                (0..n).map(|v| self.longest_walk(VertexId(v as u32), c, &mut memo)).max().unwrap_or(0)
            })
            .collect::<Vec<u32>>();
        Some(Degree::from_coords(coords))
    }

    fn longest_walk(&self, v: VertexId, color: usize, memo: &mut Vec<Option<u32>>) -> u32 {
        if let Some(len) = memo[v.index()] {
            return len;
        }
        let mut best = 0;
        for &e in self.edges_with_range(v, color) {
            best = best.max(1 + self.longest_walk(self.edge(e).source, color, memo));
        }
        memo[v.index()] = Some(best);
        best
    }

    /// Parses a vertex name or an edge word. Words are edge names separated
    /// by `.`, or plain concatenations when every edge name is one character.
    pub fn parse_path(&self, text: &str) -> Result<Path, PathError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(PathError::Empty);
        }
        if let Some(v) = self.vertex_by_name(text) {
            return Ok(self.vertex_path(v));
        }
        if let Some(e) = self.edge_by_name(text) {
            return Ok(self.edge_path(e));
        }
        let parts: Vec<String> = if text.contains('.') {
            text.split('.').map(|s| s.trim().to_string()).collect()
        } else if self.short_names {
            text.chars().map(String::from).collect()
        } else {
            return Err(PathError::UnknownName(text.to_string()));
        };
        let word = parts
            .iter()
            .map(|p| self.edge_by_name(p).ok_or_else(|| PathError::UnknownName(p.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.path_from_word(&word)
    }

    /// Inverse of [`KGraph::parse_path`].
    pub fn path_name(&self, p: &Path) -> String {
        if p.is_vertex() {
            return self.vertex_name(p.range).to_string();
        }
        let sep = if self.short_names { "" } else { "." };
        p.word.iter().map(|&e| self.edge(e).name.as_str()).collect::<Vec<_>>().join(sep)
    }
}
