//! The essential ideal, the ideals I and J, systems of parameters restricting
//! to C, and the degree-bounded freeness verdict.

use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{GroupTable, Subgroup};
use crate::induced::{
    check_counits, kunneth_comparison, mu_star, restriction, subgroup_resolution, transfer, BigradedMap, CounitReport,
    ModuleMap, RingMap,
};
use crate::linalg::{intersect_rowspaces, kernel_basis, row_basis, BitVec, Echelon, FpMatrix, IncrementalBasis};
use crate::poly::{self, monomials, Poly};
use crate::resolution::cache;
use crate::resolution::MinimalResolution;
use crate::ring::{hilbert_check, series_coefficients, CohClass, RingSlice};

/// Everything about a proper subgroup that the pipeline needs.
#[derive(Debug)]
pub struct SubgroupData {
    pub subgroup: Subgroup,
    pub res: Arc<MinimalResolution>,
    pub restriction: RingMap,
    pub transfer: ModuleMap,
}

/// Cohomology of G together with its maximal subgroups and C = Ω₁Z(G).
#[derive(Debug)]
pub struct GroupCohomology {
    pub group: Arc<GroupTable>,
    pub requested_maxdeg: usize,
    pub res: Arc<MinimalResolution>,
    pub ring: RingSlice,
    pub maximal: Vec<SubgroupData>,
    pub centre: Subgroup,
    pub centre_res: Arc<MinimalResolution>,
    pub centre_ring: RingSlice,
    pub res_to_centre: RingMap,
}

impl GroupCohomology {
    pub fn build(group: Arc<GroupTable>, maxdeg: usize, cache_dir: Option<&Path>) -> Result<Self> {
        let res = Arc::new(cache::resolve(group.clone(), maxdeg, cache_dir)?);
        Self::from_resolution(res, maxdeg)
    }

    pub fn from_resolution(res: Arc<MinimalResolution>, requested_maxdeg: usize) -> Result<Self> {
        res.validate()?;
        let group = res.group().clone();
        let ring = RingSlice::compute(res.clone())?;
        let maximal = group
            .maximal_subgroups()
            .into_par_iter()
            .map(|m| {
                let sub = subgroup_resolution(&res, &m)?;
                Ok(SubgroupData {
                    restriction: restriction(&res, &m, &sub)?,
                    transfer: transfer(&res, &m, &sub)?,
                    subgroup: m,
                    res: sub,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let centre = group.omega1_centre();
        let centre_res = subgroup_resolution(&res, &centre)?;
        let centre_ring = RingSlice::compute(centre_res.clone())?;
        let res_to_centre = restriction(&res, &centre, &centre_res)?;
        Ok(Self {
            group,
            requested_maxdeg,
            res,
            ring,
            maximal,
            centre,
            centre_res,
            centre_ring,
            res_to_centre,
        })
    }

    pub fn maxdeg(&self) -> usize {
        self.res.maxdeg()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.res.rank(n)
    }

    /// p-rank of the centre.
    pub fn d(&self) -> usize {
        self.group.elementary_rank(&self.centre)
    }

    pub fn is_trivial(&self) -> bool {
        self.group.order() == 1
    }

    pub fn mu_star(&self) -> Result<BigradedMap> {
        mu_star(&self.res, &self.centre, &self.centre_res)
    }

    pub fn counit_report(&self, mu: &BigradedMap) -> Result<CounitReport> {
        let trivial = self.group.trivial_subgroup();
        let res_1 = subgroup_resolution(&self.res, &trivial)?;
        let eps_g = restriction(&self.res, &trivial, &res_1)?;
        let trivial_c = self.centre_res.group().trivial_subgroup();
        let res_1c = subgroup_resolution(&self.centre_res, &trivial_c)?;
        let eps_c = restriction(&self.centre_res, &trivial_c, &res_1c)?;
        check_counits(mu, &self.res_to_centre, &eps_g, &eps_c)
    }
}

/// A graded subspace of `H*(G)`: one row basis per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSubspace {
    pub basis: Vec<FpMatrix>,
}

impl GradedSubspace {
    pub fn zero(dims: &[usize]) -> Self {
        Self {
            basis: dims.iter().map(|&d| FpMatrix::zeros(0, d)).collect(),
        }
    }

    pub fn maxdeg(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.rows()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.iter().all(|b| b.rows() == 0)
    }

    pub fn classes(&self, n: usize) -> Vec<CohClass> {
        self.basis[n]
            .row_vecs()
            .iter()
            .map(|v| CohClass::new(n, v.clone()))
            .collect()
    }

    pub fn contains(&self, a: &CohClass) -> bool {
        IncrementalBasis::from_rows(&self.basis[a.degree]).contains(&a.vector)
    }

    /// Degreewise containment in `other`.
    pub fn is_subspace_of(&self, other: &GradedSubspace) -> bool {
        self.basis.iter().zip(&other.basis).all(|(mine, theirs)| {
            let span = IncrementalBasis::from_rows(theirs);
            mine.row_vecs().iter().all(|v| span.contains(v))
        })
    }
}

/// Classes restricting to zero on every maximal subgroup, hence on every
/// proper subgroup. Degree 0 is excluded, except for the trivial group where
/// `Ess(1) = k` by convention.
pub fn essential_ideal(ctx: &GroupCohomology) -> Result<GradedSubspace> {
    let dims = ctx.res.cohomology_dims();
    let mut ess = GradedSubspace::zero(&dims);
    if ctx.is_trivial() {
        ess.basis[0] = FpMatrix::identity(1);
        return Ok(ess);
    }
    for n in 1..=ctx.maxdeg() {
        let kernels: Vec<FpMatrix> = ctx
            .maximal
            .par_iter()
            .map(|m| kernel_basis(m.restriction.matrix(n)))
            .collect();
        ess.basis[n] = intersect_rowspaces(&kernels)?;
    }
    Ok(ess)
}

/// Kernel of restriction to C.
pub fn ideal_i(ctx: &GroupCohomology) -> GradedSubspace {
    GradedSubspace {
        basis: ctx.res_to_centre.matrices.iter().map(kernel_basis).collect(),
    }
}

/// The ideal generated by transfers from maximal subgroups.
pub fn ideal_j(ctx: &GroupCohomology) -> Result<GradedSubspace> {
    let maxdeg = ctx.maxdeg();
    let images: Vec<FpMatrix> = (0..=maxdeg)
        .map(|m| {
            let rows: Vec<BitVec> = ctx
                .maximal
                .iter()
                .flat_map(|s| s.transfer.matrix(m).transpose().into_rows())
                .collect();
            row_basis(&FpMatrix::from_rows(rows, ctx.dim(m)))
        })
        .collect();
    let basis = (0..=maxdeg)
        .map(|n| {
            let mut span = IncrementalBasis::new(ctx.dim(n));
            let mut rows = Vec::new();
            for (m, image) in images.iter().enumerate().take(n + 1) {
                for t in image.row_vecs() {
                    let t = CohClass::new(m, t.clone());
                    for b in ctx.ring.basis(n - m) {
                        let v = ctx.ring.cup_product(&b, &t)?.vector;
                        if span.insert(&v) {
                            rows.push(v);
                        }
                    }
                }
            }
            Ok(FpMatrix::from_rows(rows, ctx.dim(n)))
        })
        .collect::<Result<_>>()?;
    Ok(GradedSubspace { basis })
}

/// `H*(C)` as a polynomial ring on the basis of `H^1(C)`.
#[derive(Debug)]
pub struct CentrePolynomials {
    d: usize,
    /// Per degree: the monomials and the solver for monomial coordinates.
    degrees: Vec<(Vec<poly::Monomial>, Echelon)>,
}

impl CentrePolynomials {
    pub fn new(ring: &RingSlice) -> Result<Self> {
        let d = ring.dim(1.min(ring.maxdeg()));
        let vars: Vec<CohClass> = (0..d).map(|i| ring.basis_class(1, i)).collect();
        let degrees = (0..=ring.maxdeg())
            .map(|n| {
                let mons = monomials(d, n);
                let columns = mons
                    .iter()
                    .map(|m| {
                        let mut c = ring.unit();
                        for (v, &e) in vars.iter().zip(m) {
                            for _ in 0..e {
                                c = ring.cup_product(&c, v)?;
                            }
                        }
                        Ok(c.vector)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let matrix = FpMatrix::from_columns(&columns, ring.dim(n));
                if matrix.rows() != mons.len() || matrix.rank() != mons.len() {
                    return Err(Error::Integrity(format!(
                        "cohomology of C is not polynomial on degree-1 classes in degree {n}"
                    )));
                }
                Ok((mons, Echelon::new(&matrix)))
            })
            .collect::<Result<_>>()?;
        Ok(Self { d, degrees })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn to_poly(&self, a: &CohClass) -> Poly {
        let (mons, solver) = &self.degrees[a.degree];
        let coords = solver.solve(&a.vector).expect("monomials span every degree");
        Poly::from_terms(self.d, coords.iter_ones().map(|i| mons[i].clone()))
    }
}

/// Whether the restrictions form a homogeneous system of parameters of
/// `H*(C) = k[t_1..t_d]`.
pub fn is_hsop_on_c(restrictions: &[Poly], d: usize) -> Result<bool> {
    poly::is_hsop(restrictions, d)
}

/// `ζ_1..ζ_d` with their restrictions to C.
#[derive(Clone, Debug)]
pub struct HsopCandidate {
    pub classes: Vec<CohClass>,
    /// Exponents over the ring generators.
    pub monomials: Vec<Vec<usize>>,
    pub restrictions: Vec<Poly>,
}

impl HsopCandidate {
    pub fn degrees(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.degree).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub enum HsopSearch {
    Found(HsopCandidate),
    NotFound { degree_cap: usize, tested: usize },
}

/// Limit on candidate tuples examined before giving up.
pub const HSOP_TEST_LIMIT: usize = 200_000;

pub fn hsop_degree_cap(order: usize, maxdeg: usize) -> usize {
    let root = (order as f64).sqrt().ceil() as usize;
    8.max(2 * root).min(maxdeg)
}

struct PoolEntry {
    class: CohClass,
    exponents: Vec<usize>,
    restriction: Poly,
}

/// Backtracking over generator monomials in ascending degree, then canonical
/// order. Each round admits candidates up to a degree bound, so the
/// returned system has the least possible top degree.
pub fn find_hsop(ctx: &GroupCohomology, centre: &CentrePolynomials) -> Result<HsopSearch> {
    let d = ctx.d();
    let cap = hsop_degree_cap(ctx.group.order(), ctx.maxdeg());
    let gens = ctx.ring.generators();
    let weights: Vec<usize> = gens.iter().map(|g| g.degree).collect();
    let mut pool = Vec::new();
    for deg in 1..=cap {
        for exps in weighted_monomials(&weights, deg) {
            let class = ctx.ring.generator_monomial(&exps)?;
            let restriction = centre.to_poly(&ctx.res_to_centre.apply(&class));
            if !restriction.is_zero() {
                pool.push(PoolEntry {
                    class,
                    exponents: exps,
                    restriction,
                });
            }
        }
    }
    let mut tested = 0;
    for bound in 1..=cap {
        let usable = pool.iter().take_while(|e| e.class.degree <= bound).count();
        let mut chosen = Vec::new();
        if search(&pool[..usable], 0, d, &mut chosen, &mut tested)? {
            let picked: Vec<&PoolEntry> = chosen.iter().map(|&i| &pool[i]).collect();
            return Ok(HsopSearch::Found(HsopCandidate {
                classes: picked.iter().map(|e| e.class.clone()).collect(),
                monomials: picked.iter().map(|e| e.exponents.clone()).collect(),
                restrictions: picked.iter().map(|e| e.restriction.clone()).collect(),
            }));
        }
        if tested >= HSOP_TEST_LIMIT {
            break;
        }
    }
    Ok(HsopSearch::NotFound {
        degree_cap: cap,
        tested,
    })
}

fn search(pool: &[PoolEntry], start: usize, d: usize, chosen: &mut Vec<usize>, tested: &mut usize) -> Result<bool> {
    if chosen.len() == d {
        let polys: Vec<Poly> = chosen.iter().map(|&i| pool[i].restriction.clone()).collect();
        *tested += 1;
        return is_hsop_on_c(&polys, d);
    }
    let current: Vec<Poly> = chosen.iter().map(|&i| pool[i].restriction.clone()).collect();
    for i in start..pool.len() {
        if *tested >= HSOP_TEST_LIMIT {
            return Ok(false);
        }
        if poly::ideal_contains(&current, &pool[i].restriction) {
            *tested += 1;
            continue;
        }
        chosen.push(i);
        if search(pool, i + 1, d, chosen, tested)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

/// Exponent vectors over generators of the given degrees with weighted total
/// `degree`, first generator most significant.
fn weighted_monomials(weights: &[usize], degree: usize) -> Vec<Vec<usize>> {
    fn rec(weights: &[usize], left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some((&w, rest)) = weights.split_first() else {
            if left == 0 {
                out.push(prefix.clone());
            }
            return;
        };
        for e in (0..=left / w).rev() {
            prefix.push(e);
            rec(rest, left - e * w, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(weights, degree, &mut Vec::new(), &mut out);
    out
}

/// Representatives of a minimal generating set of Ess over
/// `R = k[ζ_1..ζ_d]`: in each degree, a complement of `R₊ · Ess`.
pub fn minimal_generators_over_r(
    ring: &RingSlice,
    ess: &GradedSubspace,
    hsop: &HsopCandidate,
) -> Result<Vec<CohClass>> {
    let mut out = Vec::new();
    for n in 0..=ess.maxdeg() {
        let mut span = IncrementalBasis::new(ring.dim(n));
        for zeta in &hsop.classes {
            if zeta.degree <= n {
                for e in ess.classes(n - zeta.degree) {
                    span.insert(&ring.cup_product(zeta, &e)?.vector);
                }
            }
        }
        for e in ess.classes(n) {
            if span.insert(&e.vector) {
                out.push(e);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    EssentialZero,
    FreeToDegree(usize),
    RelationFound(usize),
    HsopNotFound,
    TrivialGroup,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::EssentialZero => "EssentialZero",
            Verdict::FreeToDegree(_) => "FreeToDegree",
            Verdict::RelationFound(_) => "RelationFound",
            Verdict::HsopNotFound => "HsopNotFound",
            Verdict::TrivialGroup => "TrivialGroup",
        }
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            Verdict::FreeToDegree(n) | Verdict::RelationFound(n) => Some(*n),
            _ => None,
        }
    }
}

/// Compares `dim Ess_n` with the count a free module on the generators
/// would have, for `n <= maxdeg - max deg ζ`.
pub fn freeness_verdict(ess_dims: &[usize], hsop_degrees: &[usize], generator_degrees: &[usize]) -> Result<Verdict> {
    if ess_dims.iter().all(|&x| x == 0) {
        return Ok(Verdict::EssentialZero);
    }
    let maxdeg = ess_dims.len() - 1;
    let top = hsop_degrees.iter().copied().max().unwrap_or(0);
    let Some(bound) = maxdeg.checked_sub(top) else {
        return Ok(Verdict::HsopNotFound);
    };
    let expected = series_coefficients(generator_degrees, hsop_degrees, bound + 1);
    for n in 0..=bound {
        match ess_dims[n].cmp(&expected[n]) {
            std::cmp::Ordering::Less => return Ok(Verdict::RelationFound(n)),
            std::cmp::Ordering::Greater => {
                return Err(Error::Integrity(format!(
                    "Ess has dimension {} in degree {n}, more than the {} its generators allow",
                    ess_dims[n], expected[n]
                )))
            }
            std::cmp::Ordering::Equal => {}
        }
    }
    Ok(Verdict::FreeToDegree(bound))
}

/// Multiplication by `zeta` is injective on `H^n` for all
/// `n <= maxdeg - deg zeta`.
pub fn regular_element_check(ring: &RingSlice, zeta: &CohClass) -> Result<bool> {
    if zeta.degree > ring.maxdeg() {
        return Ok(true);
    }
    for n in 0..=ring.maxdeg() - zeta.degree {
        if ring.multiplication_matrix(zeta, n)?.rank() != ring.dim(n) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Products `J · Ess` vanish in every degree in range.
pub fn annihilation_check(ring: &RingSlice, j: &GradedSubspace, ess: &GradedSubspace) -> Result<bool> {
    let maxdeg = ring.maxdeg();
    for m in 0..=maxdeg {
        for n in 0..=maxdeg - m {
            for a in j.classes(m) {
                for b in ess.classes(n) {
                    if !ring.cup_product(&a, &b)?.is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Every Künneth component of `μ*(e)`, for e essential, has its `H*(G)`
/// coordinates in Ess. `None` when G has a C_p direct factor.
pub fn subcomodule_check(ctx: &GroupCohomology, mu: &BigradedMap, ess: &GradedSubspace) -> Option<bool> {
    if ctx.group.has_cp_direct_factor() || ctx.is_trivial() {
        return None;
    }
    Some(first_factor_containment(mu, ess, ess))
}

fn first_factor_containment(map: &BigradedMap, classes: &GradedSubspace, target: &GradedSubspace) -> bool {
    let spans: Vec<IncrementalBasis> = target.basis.iter().map(IncrementalBasis::from_rows).collect();
    (0..=map.maxdeg()).all(|n| {
        classes.basis[n].row_vecs().iter().all(|e| {
            (0..=n).all(|i| {
                map.first_factor_coordinates(n, i, e)
                    .iter()
                    .all(|coords| spans[i].contains(coords))
            })
        })
    })
}

/// For `G = K x C_2` with K free of C_p factors: every essential class of G,
/// in Künneth coordinates, has its `H*(K)` coordinates in `Ess(K)`. `None`
/// when G has no such decomposition.
pub fn kunneth_containment_for(ctx: &GroupCohomology, ess: &GradedSubspace) -> Result<Option<bool>> {
    let g = &ctx.group;
    let Some((n, k)) = g.cp_direct_factors().into_iter().find(|(_, k)| {
        let kg = g.subgroup_group(k, "K");
        !kg.has_cp_direct_factor()
    }) else {
        return Ok(None);
    };
    let res_k = subgroup_resolution(&ctx.res, &k)?;
    let res_n = subgroup_resolution(&ctx.res, &n)?;
    let nk = n.order();
    let phi: Vec<usize> = (0..k.order() * nk)
        .map(|i| g.mul(k.elements()[i / nk], n.elements()[i % nk]))
        .collect();
    let split = kunneth_comparison(&res_k, &res_n, &phi, &ctx.res)?;
    let k_ctx = GroupCohomology::from_resolution(res_k, ctx.maxdeg())?;
    let ess_k = essential_ideal(&k_ctx)?;
    Ok(Some(first_factor_containment(&split, ess, &ess_k)))
}

/// `kunneth_containment_for` applied to `h x C_2`.
pub fn kunneth_containment_check(h: &GroupTable, maxdeg: usize) -> Result<bool> {
    let c2 = GroupTable::cyclic(2)?;
    let g = GroupTable::direct_product(h, &c2)?;
    let ctx = GroupCohomology::build(Arc::new(g), maxdeg, None)?;
    let ess = essential_ideal(&ctx)?;
    kunneth_containment_for(&ctx, &ess)?
        .ok_or_else(|| Error::InvalidInput(format!("{} x C2 has no complement without C_p factors", h.name())))
}

/// The computed pieces behind a report, kept for further checks.
#[derive(Debug)]
pub struct Analysis {
    pub ess: GradedSubspace,
    pub hsop: HsopSearch,
    pub generators: Vec<CohClass>,
    pub verdict: Verdict,
    pub hilbert_ok: bool,
}

/// Ess, hsop, generators, verdict and Hilbert-series check.
pub fn analyse(ctx: &GroupCohomology) -> Result<Analysis> {
    let ess = essential_ideal(ctx)?;
    if ctx.is_trivial() {
        let dims = ess.dims();
        return Ok(Analysis {
            hilbert_ok: hilbert_check(&dims, &[0], &[]),
            generators: vec![ctx.ring.unit()],
            hsop: HsopSearch::Found(HsopCandidate {
                classes: Vec::new(),
                monomials: Vec::new(),
                restrictions: Vec::new(),
            }),
            verdict: Verdict::TrivialGroup,
            ess,
        });
    }
    let centre = CentrePolynomials::new(&ctx.centre_ring)?;
    let hsop = find_hsop(ctx, &centre)?;
    let dims = ess.dims();
    let (generators, verdict, hilbert_ok) = match &hsop {
        HsopSearch::Found(c) => {
            if c.classes.len() != ctx.d() {
                return Err(Error::Integrity(
                    "hsop size differs from the p-rank of the centre".into(),
                ));
            }
            let generators = minimal_generators_over_r(&ctx.ring, &ess, c)?;
            let gen_degrees: Vec<usize> = generators.iter().map(|g| g.degree).collect();
            let verdict = freeness_verdict(&dims, &c.degrees(), &gen_degrees)?;
            let hilbert_ok = match verdict {
                Verdict::FreeToDegree(n) => hilbert_check(&dims[..=n], &gen_degrees, &c.degrees()),
                Verdict::EssentialZero => true,
                _ => false,
            };
            (generators, verdict, hilbert_ok)
        }
        HsopSearch::NotFound { .. } => {
            let verdict = if ess.is_zero() {
                Verdict::EssentialZero
            } else {
                Verdict::HsopNotFound
            };
            (Vec::new(), verdict, ess.is_zero())
        }
    };
    Ok(Analysis {
        ess,
        hsop,
        generators,
        verdict,
        hilbert_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::lookup;

    fn ctx(name: &str, maxdeg: usize) -> GroupCohomology {
        GroupCohomology::build(Arc::new(lookup(name).unwrap()), maxdeg, None).unwrap()
    }

    #[test]
    fn essential_dimensions() {
        assert_eq!(essential_ideal(&ctx("C2", 5)).unwrap().dims(), vec![0, 1, 1, 1, 1, 1]);
        assert_eq!(
            essential_ideal(&ctx("C4", 6)).unwrap().dims(),
            vec![0, 1, 0, 1, 0, 1, 0]
        );
        assert!(essential_ideal(&ctx("D8", 8)).unwrap().is_zero());
        assert_eq!(
            essential_ideal(&ctx("C2^2", 6)).unwrap().dims(),
            vec![0, 0, 0, 1, 2, 3, 4]
        );
    }

    #[test]
    fn ideals_i_and_j() {
        let c = ctx("C2^2", 4);
        assert!(ideal_i(&c).is_zero());
        let c4 = ctx("C4", 4);
        assert_eq!(ideal_i(&c4).dims(), vec![0, 1, 0, 1, 0]);
        let q8 = ctx("Q8", 4);
        assert_eq!(ideal_i(&q8).dims()[1], 2);
        let c2 = ctx("C2", 5);
        assert!(ideal_j(&c2).unwrap().is_zero());
        for name in ["C4", "D8", "Q8", "C4xC2"] {
            let c = ctx(name, 6);
            let ess = essential_ideal(&c).unwrap();
            let j = ideal_j(&c).unwrap();
            assert!(annihilation_check(&c.ring, &j, &ess).unwrap(), "{name}");
            assert!(j.is_subspace_of(&ideal_i(&c)), "{name}");
        }
    }

    #[test]
    fn hsop_search() {
        for (name, degrees) in [("C2", vec![1]), ("C4", vec![2]), ("Q8", vec![4]), ("C2^2", vec![1, 1])] {
            let c = ctx(name, 8);
            let centre = CentrePolynomials::new(&c.centre_ring).unwrap();
            let HsopSearch::Found(h) = find_hsop(&c, &centre).unwrap() else {
                panic!("{name}: no hsop");
            };
            assert_eq!(h.degrees(), degrees, "{name}");
            for z in &h.classes {
                assert!(regular_element_check(&c.ring, z).unwrap(), "{name}");
            }
        }
    }

    #[test]
    fn regularity_in_c4() {
        let c = ctx("C4", 8);
        assert!(regular_element_check(&c.ring, &c.ring.basis_class(2, 0)).unwrap());
        assert!(!regular_element_check(&c.ring, &c.ring.basis_class(1, 0)).unwrap());
    }

    #[test]
    fn verdicts() {
        let q8 = analyse(&ctx("Q8", 12)).unwrap();
        assert_eq!(q8.verdict, Verdict::FreeToDegree(8));
        assert!(q8.hilbert_ok);
        let c2 = analyse(&ctx("C2", 8)).unwrap();
        assert_eq!(c2.verdict, Verdict::FreeToDegree(7));
        assert_eq!(c2.generators.iter().map(|g| g.degree).collect::<Vec<_>>(), vec![1]);
        let c4 = analyse(&ctx("C4", 8)).unwrap();
        assert_eq!(c4.generators.iter().map(|g| g.degree).collect::<Vec<_>>(), vec![1]);
        assert_eq!(analyse(&ctx("D8", 8)).unwrap().verdict, Verdict::EssentialZero);
        let klein = analyse(&ctx("C2^2", 8)).unwrap();
        assert_eq!(klein.generators.iter().map(|g| g.degree).collect::<Vec<_>>(), vec![3]);
        let trivial = GroupCohomology::build(Arc::new(GroupTable::trivial()), 4, None).unwrap();
        assert_eq!(analyse(&trivial).unwrap().verdict, Verdict::TrivialGroup);
    }

    #[test]
    fn freeness_counts() {
        assert_eq!(
            freeness_verdict(&[0, 1, 1, 1, 1], &[1], &[1]).unwrap(),
            Verdict::FreeToDegree(3)
        );
        assert_eq!(
            freeness_verdict(&[0, 1, 1, 0, 1], &[1], &[1]).unwrap(),
            Verdict::RelationFound(3)
        );
        assert!(matches!(
            freeness_verdict(&[0, 1, 2, 1, 1], &[1], &[1]),
            Err(Error::Integrity(_))
        ));
        assert_eq!(freeness_verdict(&[0, 0, 0], &[1], &[]).unwrap(), Verdict::EssentialZero);
    }

    #[test]
    fn comodule_checks() {
        for name in ["C4", "Q8"] {
            let c = ctx(name, 6);
            let ess = essential_ideal(&c).unwrap();
            let mu = c.mu_star().unwrap();
            assert_eq!(subcomodule_check(&c, &mu, &ess), Some(true), "{name}");
        }
        let c = ctx("C4xC2", 4);
        let ess = essential_ideal(&c).unwrap();
        assert_eq!(subcomodule_check(&c, &c.mu_star().unwrap(), &ess), None);
        assert_eq!(kunneth_containment_for(&c, &ess).unwrap(), Some(true));
        assert!(kunneth_containment_check(&lookup("Q8").unwrap(), 5).unwrap());
        assert!(kunneth_containment_check(&GroupTable::trivial(), 5).unwrap());
    }
}
