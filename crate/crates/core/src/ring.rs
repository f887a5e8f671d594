//! The cohomology ring degreewise: classes, cup products through chain-map
//! lifting, ring generators and Hilbert series.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::linalg::{BitVec, FpMatrix, IncrementalBasis};
use crate::resolution::{lift_chain_map, LiftStrategy, MinimalResolution};

/// A homogeneous class, stored by its values on the free generators of the
/// resolution term in its degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CohClass {
    pub degree: usize,
    pub vector: BitVec,
}

impl CohClass {
    pub fn new(degree: usize, vector: BitVec) -> Self {
        Self { degree, vector }
    }

    pub fn is_zero(&self) -> bool {
        self.vector.is_zero()
    }

    pub fn add(&self, other: &CohClass) -> CohClass {
        assert_eq!(self.degree, other.degree, "adding classes of different degree");
        let mut v = self.vector.clone();
        v.xor_assign(&other.vector);
        CohClass::new(self.degree, v)
    }
}

/// `H^n(G)` for `n <= maxdeg`, with all product tables that fit under the
/// bound.
#[derive(Debug)]
pub struct RingSlice {
    res: Arc<MinimalResolution>,
    /// `products[i][j][s][t]` is `a_s · b_t` for basis classes of degrees
    /// `i` and `j`, present when `i + j <= maxdeg`.
    products: Vec<Vec<Vec<Vec<BitVec>>>>,
    generators: Vec<CohClass>,
}

fn lift_seed(seed: u64, j: usize, l: usize) -> u64 {
    seed ^ ((j as u64) << 32 | l as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

impl RingSlice {
    pub fn compute(res: Arc<MinimalResolution>) -> Result<Self> {
        Self::compute_with(res, LiftStrategy::Canonical)
    }

    /// Builds all product tables. Each basis class `b` of degree `j` is lifted
    /// to a chain map `P_{j+*} -> P_*`; composing with `a` gives `a · b`.
    pub fn compute_with(res: Arc<MinimalResolution>, strategy: LiftStrategy) -> Result<Self> {
        let maxdeg = res.maxdeg();
        let jobs: Vec<(usize, usize)> = (0..=maxdeg)
            .flat_map(|j| (0..res.rank(j)).map(move |l| (j, l)))
            .collect();
        let columns: Vec<Vec<Vec<BitVec>>> = jobs
            .par_iter()
            .map(|&(j, l)| {
                let strategy = match strategy {
                    LiftStrategy::Canonical => LiftStrategy::Canonical,
                    LiftStrategy::Perturbed(seed) => LiftStrategy::Perturbed(lift_seed(seed, j, l)),
                };
                let map = Self::product_lift(&res, j, l, strategy)?;
                // For each i: the classes a_s · b_l, s over the basis of H^i.
                Ok((0..=maxdeg - j)
                    .map(|i| map.cochain_matrix(i, res.rank(i)).transpose().into_rows())
                    .collect())
            })
            .collect::<Result<_>>()?;

        let mut products: Vec<Vec<Vec<Vec<BitVec>>>> = (0..=maxdeg)
            .map(|i| {
                (0..=maxdeg - i)
                    .map(|j| vec![Vec::with_capacity(res.rank(j)); res.rank(i)])
                    .collect()
            })
            .collect();
        for (&(j, _), by_degree) in jobs.iter().zip(columns) {
            for (i, classes) in by_degree.into_iter().enumerate() {
                for (s, v) in classes.into_iter().enumerate() {
                    products[i][j][s].push(v);
                }
            }
        }
        let mut slice = Self {
            res,
            products,
            generators: Vec::new(),
        };
        slice.generators = slice.find_generators();
        Ok(slice)
    }

    /// Chain map lifting the basis class `b_l` of degree `j`.
    pub fn product_lift(
        res: &MinimalResolution,
        j: usize,
        l: usize,
        strategy: LiftStrategy,
    ) -> Result<crate::resolution::ChainMap> {
        let initial: Vec<BitVec> = (0..res.rank(j))
            .map(|m| {
                if m == l {
                    BitVec::unit(res.order(), 0)
                } else {
                    BitVec::zeros(res.order())
                }
            })
            .collect();
        let identity: Vec<usize> = (0..res.order()).collect();
        lift_chain_map(res.complex(), &identity, res, j, initial, res.maxdeg() - j, strategy)
    }

    fn find_generators(&self) -> Vec<CohClass> {
        let mut out = Vec::new();
        for n in 1..=self.maxdeg() {
            let mut basis = self.decomposables(n);
            for s in 0..self.dim(n) {
                let e = BitVec::unit(self.dim(n), s);
                if basis.insert(&e) {
                    out.push(CohClass::new(n, e));
                }
            }
        }
        out
    }

    /// Span of products of classes of positive degree, inside `H^n`.
    pub fn decomposables(&self, n: usize) -> IncrementalBasis {
        let mut basis = IncrementalBasis::new(self.dim(n));
        for i in 1..n {
            for row in &self.products[i][n - i] {
                for v in row {
                    basis.insert(v);
                }
            }
        }
        basis
    }

    pub fn resolution(&self) -> &Arc<MinimalResolution> {
        &self.res
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        self.res.group()
    }

    pub fn maxdeg(&self) -> usize {
        self.res.maxdeg()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.res.cohomology_dims()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.res.rank(n)
    }

    /// Bilinear table for `H^i x H^j -> H^{i+j}`: entry `[s][t]`.
    pub fn product_table(&self, i: usize, j: usize) -> Result<&[Vec<BitVec>]> {
        self.check_degree(i + j)?;
        Ok(&self.products[i][j])
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.maxdeg() {
            return Err(Error::DegreeOutOfRange {
                requested: n,
                available: self.maxdeg(),
            });
        }
        Ok(())
    }

    pub fn basis_class(&self, n: usize, s: usize) -> CohClass {
        CohClass::new(n, BitVec::unit(self.dim(n), s))
    }

    pub fn basis(&self, n: usize) -> Vec<CohClass> {
        (0..self.dim(n)).map(|s| self.basis_class(n, s)).collect()
    }

    pub fn unit(&self) -> CohClass {
        self.basis_class(0, 0)
    }

    pub fn zero(&self, n: usize) -> CohClass {
        CohClass::new(n, BitVec::zeros(self.dim(n)))
    }

    pub fn cup_product(&self, a: &CohClass, b: &CohClass) -> Result<CohClass> {
        let n = a.degree + b.degree;
        self.check_degree(n)?;
        if a.vector.len() != self.dim(a.degree) || b.vector.len() != self.dim(b.degree) {
            return Err(Error::DimensionMismatch("class does not belong to this ring".into()));
        }
        let table = &self.products[a.degree][b.degree];
        let mut out = BitVec::zeros(self.dim(n));
        for s in a.vector.iter_ones() {
            for t in b.vector.iter_ones() {
                out.xor_assign(&table[s][t]);
            }
        }
        Ok(CohClass::new(n, out))
    }

    pub fn power(&self, a: &CohClass, k: usize) -> Result<CohClass> {
        let mut out = self.unit();
        for _ in 0..k {
            out = self.cup_product(&out, a)?;
        }
        Ok(out)
    }

    /// Matrix of `x -> a · x` from `H^n` to `H^{n + deg a}`.
    pub fn multiplication_matrix(&self, a: &CohClass, n: usize) -> Result<FpMatrix> {
        let columns = self
            .basis(n)
            .iter()
            .map(|b| self.cup_product(a, b).map(|c| c.vector))
            .collect::<Result<Vec<_>>>()?;
        Ok(FpMatrix::from_columns(&columns, self.dim(n + a.degree)))
    }

    /// A minimal set of ring generators: in each degree, the greedy
    /// complement of the decomposables among the basis classes.
    pub fn generators(&self) -> &[CohClass] {
        &self.generators
    }

    pub fn generator_degrees(&self) -> Vec<usize> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    /// Product of generators raised to `exponents` (one per generator).
    pub fn generator_monomial(&self, exponents: &[usize]) -> Result<CohClass> {
        let mut out = self.unit();
        for (g, &e) in self.generators.iter().zip(exponents) {
            out = self.cup_product(&out, &self.power(g, e)?)?;
        }
        Ok(out)
    }
}

/// Coefficients of `(Σ_j t^{e_j}) / Π_i (1 - t^{d_i})` in degrees `0..len`.
pub fn series_coefficients(numerator: &[usize], denominator: &[usize], len: usize) -> Vec<usize> {
    let mut coeffs = vec![0usize; len];
    for &e in numerator {
        if e < len {
            coeffs[e] += 1;
        }
    }
    for &d in denominator {
        assert!(d > 0, "denominator degrees must be positive");
        for n in d..len {
            coeffs[n] += coeffs[n - d];
        }
    }
    coeffs
}

/// True iff `dims` agrees degreewise with the series expansion.
pub fn hilbert_check(dims: &[usize], numerator: &[usize], denominator: &[usize]) -> bool {
    series_coefficients(numerator, denominator, dims.len()) == dims
}
