//! Finite linear combinations `Σ a_{μ,ν} t_μ t*_ν` and their evaluation.

use std::collections::BTreeMap;

use num_complex::{Complex, Complex64};
use rand::Rng;

use super::family::IsometryFamily;
use super::matrix::{OperatorMatrix, Scalar};
use super::RepError;
use crate::graph::{KGraph, Path};

/// Converts the exact 0/1 spanning matrices into coefficient scalars.
pub trait FromInt: Scalar {
    fn from_i64(x: i64) -> Self;
}

impl FromInt for i64 {
    fn from_i64(x: i64) -> Self {
        x
    }
}

impl FromInt for Complex<i64> {
    fn from_i64(x: i64) -> Self {
        Complex::new(x, 0)
    }
}

impl FromInt for Complex64 {
    fn from_i64(x: i64) -> Self {
        Complex64::new(x as f64, 0.0)
    }
}

/// A coefficient table `(μ, ν) ↦ a_{μ,ν}` with `s(μ) = s(ν)`. Zero
/// coefficients are not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalElement<T> {
    terms: BTreeMap<(Path, Path), T>,
}

impl<T: FromInt> Default for FormalElement<T> {
    fn default() -> Self {
        FormalElement { terms: BTreeMap::new() }
    }
}

impl<T: FromInt> FormalElement<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `c · t_μ t*_ν`.
    pub fn add_term(&mut self, g: &KGraph, mu: Path, nu: Path, c: T) -> Result<(), RepError> {
        if mu.source() != nu.source() {
            return Err(RepError::SourceMismatch(g.path_name(&mu), g.path_name(&nu)));
        }
        let slot = self.terms.entry((mu, nu)).or_insert(T::zero());
        *slot = *slot + c;
        self.terms.retain(|_, v| !v.is_zero());
        Ok(())
    }

    pub fn with_term(mut self, g: &KGraph, mu: Path, nu: Path, c: T) -> Result<Self, RepError> {
        self.add_term(g, mu, nu, c)?;
        Ok(self)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Path, T)> {
        self.terms.iter().map(|((m, n), &c)| (m, n, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mu: &Path, nu: &Path) -> T {
        self.terms.get(&(mu.clone(), nu.clone())).copied().unwrap_or(T::zero())
    }

    /// `Φ(a)`: keeps exactly the coefficients with `μ = ν`.
    pub fn diagonal(&self) -> Self {
        FormalElement { terms: self.terms.iter().filter(|((m, n), _)| m == n).map(|(k, &v)| (k.clone(), v)).collect() }
    }

    /// The diagonal coefficients `λ ↦ a_{λ,λ}`.
    pub fn diagonal_coefficients(&self) -> BTreeMap<Path, T> {
        self.terms.iter().filter(|((m, n), _)| m == n).map(|((m, _), &v)| (m.clone(), v)).collect()
    }

    /// `a*`, with `(t_μ t*_ν)* = t_ν t*_μ`.
    pub fn adjoint(&self) -> Self {
        FormalElement { terms: self.terms.iter().map(|((m, n), &v)| ((n.clone(), m.clone()), v.conj())).collect() }
    }

    pub fn map<U: FromInt>(&self, f: impl Fn(T) -> U) -> FormalElement<U> {
        FormalElement {
            terms: self.terms.iter().map(|(k, &v)| (k.clone(), f(v))).filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    /// `Σ a_{μ,ν} T_μ T*_ν` in the family, using compressed spanning elements.
    pub fn evaluate(&self, fam: &IsometryFamily) -> Result<OperatorMatrix<T>, RepError> {
        let mut out = OperatorMatrix::zeros(fam.basis());
        for ((mu, nu), &c) in &self.terms {
            let m = fam.spanning(mu, nu)?.map(T::from_i64).scale(c);
            out = out.add(&m);
        }
        Ok(out)
    }

    /// `Σ c_λ M(λ)` for a diagonal table and a projection assignment `M`.
    pub fn evaluate_diagonal_with(
        &self,
        fam: &IsometryFamily,
        projection: impl Fn(&Path) -> Result<OperatorMatrix<i64>, RepError>,
    ) -> Result<OperatorMatrix<T>, RepError> {
        let mut out = OperatorMatrix::zeros(fam.basis());
        for (lambda, c) in self.diagonal_coefficients() {
            out = out.add(&projection(&lambda)?.map(T::from_i64).scale(c));
        }
        Ok(out)
    }

    pub fn to_json(&self, g: &KGraph) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|((m, n), v)| {
                    let c = v.to_complex();
                    serde_json::json!({"mu": g.path_name(m), "nu": g.path_name(n), "re": c.re, "im": c.im})
                })
                .collect(),
        )
    }
}

/// Random elements supported on pairs from `support` with equal sources.
/// Coefficients are Gaussian integers with parts in `-bound..=bound`.
pub fn random_gaussian_element<R: Rng>(
    g: &KGraph,
    support: &[Path],
    terms: usize,
    bound: i64,
    rng: &mut R,
) -> FormalElement<Complex<i64>> {
    let pairs: Vec<(&Path, &Path)> = support
        .iter()
        .flat_map(|m| support.iter().map(move |n| (m, n)))
        .filter(|(m, n)| m.source() == n.source())
        .collect();
    let mut a = FormalElement::new();
    if pairs.is_empty() {
        return a;
    }
    for _ in 0..terms {
        let (m, n) = pairs[rng.random_range(0..pairs.len())];
        let c = Complex::new(rng.random_range(-bound..=bound), rng.random_range(-bound..=bound));
        a.add_term(g, m.clone(), n.clone(), c).expect("sources agree");
    }
    a
}

/// A random table over all pairs of `support` with equal sources, entries
/// uniform in the unit square.
pub fn random_complex_table<R: Rng>(g: &KGraph, support: &[Path], rng: &mut R) -> FormalElement<Complex64> {
    let mut a = FormalElement::new();
    for m in support {
        for n in support {
            if m.source() == n.source() {
                let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                a.add_term(g, m.clone(), n.clone(), c).expect("sources agree");
            }
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::degree::Degree;
    use crate::graph::make_bouquet;
    use crate::repalg::family::build_fock_family;

    #[test]
    fn diagonal_keeps_equal_pairs() {
        let g = make_bouquet(2);
        let (a, b) = (g.parse_path("a").unwrap(), g.parse_path("b").unwrap());
        let x = FormalElement::new()
            .with_term(&g, a.clone(), a.clone(), Complex::new(2i64, 0))
            .unwrap()
            .with_term(&g, a.clone(), b.clone(), Complex::new(0, 1))
            .unwrap();
        let d = x.diagonal();
        assert_eq!(d.len(), 1);
        assert_eq!(d.coefficient(&a, &a), Complex::new(2, 0));
        assert_eq!(d.diagonal(), d);
        assert_eq!(x.adjoint().coefficient(&b, &a), Complex::new(0, -1));
    }

    #[test]
    fn evaluation_is_linear() {
        let g = Arc::new(make_bouquet(2));
        let fam = build_fock_family(&g, &Degree::from_coords(vec![2])).unwrap();
        let (a, b) = (g.parse_path("a").unwrap(), g.parse_path("b").unwrap());
        let x = FormalElement::new().with_term(&g, a.clone(), b.clone(), 3i64).unwrap();
        let y = FormalElement::new().with_term(&g, b.clone(), b.clone(), -1i64).unwrap();
        let mut xy = x.clone();
        xy.add_term(&g, b.clone(), b.clone(), -1).unwrap();
        assert_eq!(xy.evaluate(&fam).unwrap(), x.evaluate(&fam).unwrap().add(&y.evaluate(&fam).unwrap()));
    }
}
