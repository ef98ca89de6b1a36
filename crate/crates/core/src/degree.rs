//! Multi-indices in `N^k` with the coordinatewise lattice order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A point of `N^k`. The rank is the length of the coordinate vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Degree(Vec<u32>);

impl Degree {
    pub fn zero(rank: usize) -> Self {
        Degree(vec![0; rank])
    }

    pub fn from_coords(coords: impl Into<Vec<u32>>) -> Self {
        Degree(coords.into())
    }

    /// The generator `e_i` for a zero-based color index `i`.
    pub fn unit(rank: usize, color: usize) -> Self {
        let mut d = Degree::zero(rank);
        d.0[color] = 1;
        d
    }

    /// Every coordinate equal to `value`.
    pub fn splat(rank: usize, value: u32) -> Self {
        Degree(vec![value; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Coordinatewise `<=`.
    pub fn le(&self, other: &Degree) -> bool {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn join(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn meet(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn add(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, defined only when `other <= self`.
    pub fn checked_sub(&self, other: &Degree) -> Option<Degree> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Degree)
    }

    /// Truncated difference `max(self - other, 0)` per coordinate.
    pub fn saturating_sub(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a.saturating_sub(*b)).collect())
    }

    /// Multiset of zero-based colors, sorted ascending: the color sequence of a
    /// canonical word of this degree.
    pub fn color_sequence(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.total() as usize);
        for (i, &c) in self.0.iter().enumerate() {
            out.extend(std::iter::repeat_n(i, c as usize));
        }
        out
    }

    /// All degrees `d` with `d <= self`, in graded order (see [`graded_cmp`]).
    pub fn down_set(&self) -> Vec<Degree> {
        let mut out = vec![Degree::zero(self.rank())];
        for (i, &c) in self.0.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (c as usize + 1));
            for d in &out {
                for v in 0..=c {
                    let mut e = d.clone();
                    e.0[i] = v;
                    next.push(e);
                }
            }
            out = next;
        }
        out.sort_by(graded_cmp);
        out
    }
}

/// Order by total degree first, then lexicographically on coordinates.
/// This is the breadth-first order used by every search in the crate.
pub fn graded_cmp(a: &Degree, b: &Degree) -> Ordering {
    a.total().cmp(&b.total()).then_with(|| a.0.cmp(&b.0))
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid degree literal `{0}`")]
pub struct ParseDegreeError(pub String);

impl FromStr for Degree {
    type Err = ParseDegreeError;

    /// Accepts `3`, `2,2`, `(2,2)` or `[1, 0, 2]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        if trimmed.trim().is_empty() {
            return Err(ParseDegreeError(s.to_string()));
        }
        trimmed
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map(Degree)
            .map_err(|_| ParseDegreeError(s.to_string()))
    }
}

/// Degree of a boundary path: each coordinate finite or infinite.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtDegree(Vec<Option<u32>>);

impl ExtDegree {
    pub fn finite(d: &Degree) -> Self {
        ExtDegree(d.coords().iter().map(|&c| Some(c)).collect())
    }

    pub fn infinite(rank: usize) -> Self {
        ExtDegree(vec![None; rank])
    }

    pub fn from_coords(coords: Vec<Option<u32>>) -> Self {
        ExtDegree(coords)
    }

    pub fn coords(&self) -> &[Option<u32>] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }

    pub fn as_finite(&self) -> Option<Degree> {
        self.0.iter().copied().collect::<Option<Vec<_>>>().map(Degree)
    }

    /// `n <= self`, with infinity above everything.
    pub fn contains(&self, n: &Degree) -> bool {
        self.0.iter().zip(n.coords()).all(|(a, b)| a.is_none_or(|a| *b <= a))
    }

    pub fn checked_sub(&self, n: &Degree) -> Option<ExtDegree> {
        self.0
            .iter()
            .zip(n.coords())
            .map(|(a, b)| match a {
                None => Some(None),
                Some(a) => a.checked_sub(*b).map(Some),
            })
            .collect::<Option<Vec<_>>>()
            .map(ExtDegree)
    }

    pub fn add(&self, n: &Degree) -> ExtDegree {
        ExtDegree(self.0.iter().zip(n.coords()).map(|(a, b)| a.map(|a| a + b)).collect())
    }

    /// Coordinatewise minimum with a finite degree.
    pub fn clamp(&self, n: &Degree) -> Degree {
        Degree(self.0.iter().zip(n.coords()).map(|(a, b)| a.map_or(*b, |a| a.min(*b))).collect())
    }
}

impl fmt::Debug for ExtDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExtDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match c {
                Some(c) => write!(f, "{c}")?,
                None => write!(f, "inf")?,
            }
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(c: &[u32]) -> Degree {
        Degree::from_coords(c.to_vec())
    }

    #[test]
    fn lattice_operations() {
        assert_eq!(d(&[1, 3]).join(&d(&[2, 0])), d(&[2, 3]));
        assert_eq!(d(&[1, 3]).meet(&d(&[2, 0])), d(&[1, 0]));
        assert!(d(&[1, 0]).le(&d(&[1, 1])));
        assert!(!d(&[2, 0]).le(&d(&[1, 1])));
        assert_eq!(d(&[2, 2]).checked_sub(&d(&[1, 2])), Some(d(&[1, 0])));
        assert_eq!(d(&[2, 2]).checked_sub(&d(&[3, 0])), None);
    }

    #[test]
    fn down_set_is_graded() {
        let all = d(&[1, 2]).down_set();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], d(&[0, 0]));
        assert_eq!(all[1], d(&[0, 1]));
        assert_eq!(all[2], d(&[1, 0]));
        assert_eq!(all.last().unwrap(), &d(&[1, 2]));
    }

    #[test]
    fn parse_literals() {
        assert_eq!("3".parse::<Degree>().unwrap(), d(&[3]));
        assert_eq!("(2, 2)".parse::<Degree>().unwrap(), d(&[2, 2]));
        assert_eq!("[1,0,2]".parse::<Degree>().unwrap(), d(&[1, 0, 2]));
        assert!("".parse::<Degree>().is_err());
        assert!("a,1".parse::<Degree>().is_err());
    }

    #[test]
    fn extended_degree() {
        let x = ExtDegree::from_coords(vec![None, Some(2)]);
        assert!(x.contains(&d(&[100, 2])));
        assert!(!x.contains(&d(&[0, 3])));
        assert_eq!(x.clamp(&d(&[8, 8])), d(&[8, 2]));
        assert_eq!(x.checked_sub(&d(&[5, 1])).unwrap(), ExtDegree::from_coords(vec![None, Some(1)]));
        assert!(x.checked_sub(&d(&[0, 3])).is_none());
    }
}
