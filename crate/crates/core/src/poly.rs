//! Homogeneous polynomials over F_2, for deciding whether restrictions to C
//! form a system of parameters.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::linalg::{BitVec, IncrementalBasis};

pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeSet<Monomial>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeSet::new(),
        }
    }

    pub fn monomial(exponents: Monomial) -> Self {
        Self {
            nvars: exponents.len(),
            terms: BTreeSet::from([exponents]),
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::monomial(m)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Self::zero(nvars);
        for t in terms {
            assert_eq!(t.len(), nvars);
            p.toggle(t);
        }
        p
    }

    fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn degree(&self) -> Option<usize> {
        let mut degrees = self.terms.iter().map(|m| m.iter().sum::<u32>() as usize);
        let d = degrees.next()?;
        degrees.all(|e| e == d).then_some(d)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for t in &other.terms {
            out.toggle(t.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        out
    }
}

/// All monomials of total degree `degree` in `nvars` variables, in
/// lexicographic order with the first variable most significant.
pub fn monomials(nvars: usize, degree: usize) -> Vec<Monomial> {
    fn rec(nvars: usize, degree: u32, prefix: &mut Monomial, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(degree);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=degree).rev() {
            prefix.push(e);
            rec(nvars, degree - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(nvars, degree as u32, &mut Vec::new(), &mut out);
    out
}

/// The degree-`degree` piece of the ideal generated by `gens`, as a basis
/// over the monomials of that degree.
fn ideal_piece(nvars: usize, gens: &[Poly], degree: usize) -> (IncrementalBasis, HashMap<Monomial, usize>) {
    let basis_monomials = monomials(nvars, degree);
    let index: HashMap<Monomial, usize> = basis_monomials
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut basis = IncrementalBasis::new(basis_monomials.len());
    for g in gens {
        let Some(dg) = g.degree() else { continue };
        if dg > degree {
            continue;
        }
        for m in monomials(nvars, degree - dg) {
            let product = g.mul(&Poly::monomial(m));
            basis.insert(&to_vector(&product, &index));
        }
    }
    (basis, index)
}

fn to_vector(p: &Poly, index: &HashMap<Monomial, usize>) -> BitVec {
    let mut v = BitVec::zeros(index.len());
    for t in p.terms() {
        v.flip(index[t]);
    }
    v
}

/// Whether the homogeneous polynomial `p` lies in the ideal generated by
/// `gens`.
pub fn ideal_contains(gens: &[Poly], p: &Poly) -> bool {
    let Some(d) = p.degree() else {
        return p.is_zero();
    };
    let (basis, index) = ideal_piece(p.nvars(), gens, d);
    basis.contains(&to_vector(p, &index))
}

/// Decides whether `k[t_1..t_d]/(r_1..r_d)` is finite dimensional. For a
/// complete intersection the quotient vanishes above `Σ (deg r_i - 1)`, so
/// it suffices to check that the ideal fills degree `Σ (deg r_i - 1) + 1`.
pub fn is_hsop(polys: &[Poly], d: usize) -> Result<bool> {
    if polys.len() != d {
        return Err(Error::InvalidInput(format!(
            "a system of parameters in {d} variables has exactly {d} elements, got {}",
            polys.len()
        )));
    }
    if polys.iter().any(|p| p.nvars() != d) {
        return Err(Error::DimensionMismatch(
            "polynomial has the wrong number of variables".into(),
        ));
    }
    let mut degrees = Vec::with_capacity(d);
    for p in polys {
        match p.degree() {
            Some(deg) if deg > 0 => degrees.push(deg),
            // Zero or non-homogeneous or constant: not a valid parameter.
            _ => return Ok(false),
        }
    }
    let top = degrees.iter().map(|e| e - 1).sum::<usize>() + 1;
    let (basis, index) = ideal_piece(d, polys, top);
    Ok(basis.dim() == index.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 3).len(), 4);
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(1, 5), vec![vec![5]]);
        assert_eq!(monomials(2, 1), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn hsop_examples() {
        let t = |i| Poly::var(2, i);
        let t1 = Poly::var(1, 0);
        assert!(is_hsop(&[t1.mul(&t1)], 1).unwrap());
        assert!(!is_hsop(&[t(0), t(0).mul(&t(0))], 2).unwrap());
        assert!(is_hsop(&[t(0).add(&t(1)), t(0).mul(&t(1))], 2).unwrap());
        assert!(is_hsop(&[t(0), t(1)], 2).unwrap());
        assert!(is_hsop(&[t(0)], 2).is_err());
        assert!(!is_hsop(&[Poly::zero(1)], 1).unwrap());
    }

    #[test]
    fn dickson_invariants_are_parameters() {
        // x^2 + xy + y^2 and x^2 y + x y^2 on two variables.
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let d1 = x.mul(&x).add(&x.mul(&y)).add(&y.mul(&y));
        let d0 = x.mul(&x).mul(&y).add(&x.mul(&y).mul(&y));
        assert!(is_hsop(&[d1, d0], 2).unwrap());
        // (x + y)^2 and xy(x + y) share the factor x + y.
        let s = x.add(&y);
        assert!(!is_hsop(&[s.mul(&s), x.mul(&y).mul(&s)], 2).unwrap());
    }

    #[test]
    fn membership() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        assert!(ideal_contains(std::slice::from_ref(&x), &x.mul(&y)));
        assert!(!ideal_contains(std::slice::from_ref(&x), &y.mul(&y)));
        assert!(ideal_contains(&[], &Poly::zero(2)));
    }
}
