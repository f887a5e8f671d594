//! Maps between cohomology rings: restriction, transfer, Künneth
//! comparisons and the coaction `μ*` of the central subgroup C.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{GroupTable, Subgroup};
use crate::linalg::{BitVec, FpMatrix};
use crate::resolution::{
    lift_along_hom, lift_chain_map, restrict_to_subgroup, tensor_complex, LiftStrategy, MinimalResolution,
    TensorComplex,
};
use crate::ring::{CohClass, RingSlice};

/// A degree-preserving linear map between cohomology rings, one matrix per
/// degree (columns index the source basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMap {
    pub label: String,
    pub matrices: Vec<FpMatrix>,
}

impl RingMap {
    pub fn maxdeg(&self) -> usize {
        self.matrices.len() - 1
    }

    pub fn matrix(&self, n: usize) -> &FpMatrix {
        &self.matrices[n]
    }

    pub fn apply(&self, a: &CohClass) -> CohClass {
        CohClass::new(a.degree, self.matrices[a.degree].mul_vec(&a.vector))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &RingMap) -> Result<RingMap> {
        let top = self.maxdeg().min(first.maxdeg());
        Ok(RingMap {
            label: format!("{} . {}", self.label, first.label),
            matrices: (0..=top)
                .map(|n| self.matrices[n].mul(&first.matrices[n]))
                .collect::<Result<_>>()?,
        })
    }

    /// Checks `f(1) = 1` and `f(a b) = f(a) f(b)` on all pairs of basis
    /// classes with total degree in range.
    pub fn is_multiplicative(&self, source: &RingSlice, target: &RingSlice) -> Result<bool> {
        if self.apply(&source.unit()) != target.unit() {
            return Ok(false);
        }
        let top = self.maxdeg().min(source.maxdeg()).min(target.maxdeg());
        for i in 1..=top {
            for j in i..=top - i {
                for a in source.basis(i) {
                    for b in source.basis(j) {
                        let lhs = self.apply(&source.cup_product(&a, &b)?);
                        let rhs = target.cup_product(&self.apply(&a), &self.apply(&b))?;
                        if lhs != rhs {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

/// A linear map that is only a module map (transfer).
pub type ModuleMap = RingMap;

/// Resolution of `h` regarded as an abstract group (element `i` is
/// `h.elements()[i]`), to the same degree as `res`.
pub fn subgroup_resolution(res: &MinimalResolution, h: &Subgroup) -> Result<Arc<MinimalResolution>> {
    let g = res.group();
    let h = g.subgroup(h.elements())?;
    let name = format!("{}_sub{}", g.name(), h.order());
    let group = Arc::new(g.subgroup_group(&h, name));
    Ok(Arc::new(MinimalResolution::compute(group, res.maxdeg())?))
}

fn check_subgroup_resolution(res_g: &MinimalResolution, h: &Subgroup, res_h: &MinimalResolution) -> Result<()> {
    let expected = res_g.group().subgroup_group(h, "");
    if expected.table_rows() != res_h.group().table_rows() {
        return Err(Error::InvalidInput(
            "subgroup resolution is not over the subgroup as indexed by its elements".into(),
        ));
    }
    Ok(())
}

/// `Res^G_H`, induced by the inclusion through a chain lift.
pub fn restriction(res_g: &MinimalResolution, h: &Subgroup, res_h: &MinimalResolution) -> Result<RingMap> {
    let h = res_g.group().subgroup(h.elements())?;
    check_subgroup_resolution(res_g, &h, res_h)?;
    let top = res_g.maxdeg().min(res_h.maxdeg());
    let map = lift_along_hom(h.elements(), res_h, res_g, top)?;
    Ok(RingMap {
        label: format!("res {}->{}", res_g.group().name(), h.order()),
        matrices: (0..=top).map(|n| map.cochain_matrix(n, res_g.rank(n))).collect(),
    })
}

/// `tr^G_H: H*(H) -> H*(G)`. A kH-chain map `f: P^G -> Q^H` covering the
/// identity turns a class `β` of H into the kH-cocycle `β f` on `P^G`;
/// summing it over coset representatives gives a kG-cocycle.
pub fn transfer(res_g: &MinimalResolution, h: &Subgroup, res_h: &MinimalResolution) -> Result<ModuleMap> {
    let h = res_g.group().subgroup(h.elements())?;
    check_subgroup_resolution(res_g, &h, res_h)?;
    let restricted = restrict_to_subgroup(res_g, &h)?;
    let ncos = restricted.coset_reps.len();
    let top = res_g.maxdeg().min(res_h.maxdeg());
    let identity: Vec<usize> = (0..h.order()).collect();
    let initial = vec![BitVec::unit(h.order(), 0); ncos];
    let f = lift_chain_map(
        &restricted.complex,
        &identity,
        res_h,
        0,
        initial,
        top,
        LiftStrategy::Canonical,
    )?;
    let matrices = (0..=top)
        .map(|n| {
            let m = f.cochain_matrix(n, res_h.rank(n));
            // (tr β)(e_s) = Σ_g (β f)(g⁻¹ e_s) over left coset reps g; the
            // elements g⁻¹ run over right coset reps, so this is the sum
            // over the kH-generators rep_c · e_s.
            let rows = (0..res_g.rank(n))
                .map(|s| {
                    let mut row = BitVec::zeros(res_h.rank(n));
                    for c in 0..ncos {
                        row.xor_assign(m.row(s * ncos + c));
                    }
                    row
                })
                .collect();
            FpMatrix::from_rows(rows, res_h.rank(n))
        })
        .collect();
    Ok(RingMap {
        label: format!("tr {}->{}", h.order(), res_g.group().name()),
        matrices,
    })
}

/// A map into `H*(A) ⊗ H*(B)`, written in the basis dual to the generators
/// `e_i ⊗ f_j` of the tensor product of minimal resolutions.
#[derive(Clone, Debug)]
pub struct BigradedMap {
    pub tensor: TensorComplex,
    pub matrices: Vec<FpMatrix>,
}

impl BigradedMap {
    pub fn maxdeg(&self) -> usize {
        self.matrices.len() - 1
    }

    fn block(&self, n: usize, i: usize) -> (usize, usize, usize) {
        let mut offset = 0;
        for &(p, ra, rb) in &self.tensor.layout[n] {
            if p == i {
                return (offset, ra, rb);
            }
            offset += ra * rb;
        }
        unreachable!("bidegree outside the layout")
    }

    /// The `H^i(A) ⊗ H^{n-i}(B)` part of the degree-n matrix. Row `a * rb + b`
    /// is the coordinate on `α_a ⊗ β_b`.
    pub fn component(&self, n: usize, i: usize) -> FpMatrix {
        let (offset, ra, rb) = self.block(n, i);
        let m = &self.matrices[n];
        FpMatrix::from_rows((offset..offset + ra * rb).map(|r| m.row(r).clone()).collect(), m.cols())
    }

    /// Coordinates of the image of `v` in bidegree `(i, n - i)`, as
    /// `ra` vectors in `H^i(A)` (one per basis class of `H^{n-i}(B)`),
    /// i.e. columns of the `ra x rb` coefficient block.
    pub fn first_factor_coordinates(&self, n: usize, i: usize, v: &BitVec) -> Vec<BitVec> {
        let (offset, ra, rb) = self.block(n, i);
        let image = self.matrices[n].mul_vec(v);
        (0..rb)
            .map(|b| BitVec::from_bits((0..ra).map(|a| image.get(offset + a * rb + b))))
            .collect()
    }

    /// Product in `H*(A) ⊗ H*(B)`: `(x ⊗ y)(x' ⊗ y') = x x' ⊗ y y'`.
    pub fn bigraded_product(
        &self,
        ring_a: &RingSlice,
        ring_b: &RingSlice,
        (u, n): (&BitVec, usize),
        (v, m): (&BitVec, usize),
    ) -> Result<BitVec> {
        let total = n + m;
        let mut out = BitVec::zeros(self.tensor.complex.rank(total));
        for (p, ra, rb) in self.tensor.layout[n].clone() {
            let (off_u, _, _) = self.block(n, p);
            for (q, ra2, rb2) in self.tensor.layout[m].clone() {
                let (off_v, _, _) = self.block(m, q);
                let ta = ring_a.product_table(p, q)?;
                let tb = ring_b.product_table(n - p, m - q)?;
                let (off_out, _, rb_out) = self.block(total, p + q);
                for iu in (0..ra * rb).filter(|&k| u.get(off_u + k)) {
                    for iv in (0..ra2 * rb2).filter(|&k| v.get(off_v + k)) {
                        let x = &ta[iu / rb][iv / rb2];
                        let y = &tb[iu % rb][iv % rb2];
                        for a in x.iter_ones() {
                            for b in y.iter_ones() {
                                out.flip(off_out + a * rb_out + b);
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Compares the tensor product of resolutions of A and B with a minimal
/// resolution of G along an isomorphism `phi: A x B -> G` (element `(a, b)`
/// at `a * |B| + b`). The per-degree matrices take a class of G to its
/// Künneth coordinates and must be invertible.
pub fn kunneth_comparison(
    res_a: &MinimalResolution,
    res_b: &MinimalResolution,
    phi: &[usize],
    res_g: &MinimalResolution,
) -> Result<BigradedMap> {
    let top = res_a.maxdeg().min(res_b.maxdeg()).min(res_g.maxdeg());
    let tensor = tensor_complex(res_a, res_b, top)?;
    let product = GroupTable::direct_product(res_a.group(), res_b.group())?;
    if !product.is_homomorphism_to(phi, res_g.group()) || product.order() != res_g.order() {
        return Err(Error::NotAHomomorphism(
            "Künneth comparison needs an isomorphism A x B -> G".into(),
        ));
    }
    let map = lift_chain_map(
        &tensor.complex,
        phi,
        res_g,
        0,
        vec![BitVec::unit(res_g.order(), 0)],
        top,
        LiftStrategy::Canonical,
    )?;
    let mut matrices = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let m = map.cochain_matrix(n, res_g.rank(n));
        if m.rows() != m.cols() || m.rank() != m.cols() {
            return Err(Error::Integrity(format!(
                "Künneth comparison fails in degree {n}: {} tensor classes, {} classes, rank {}",
                m.rows(),
                m.cols(),
                m.rank()
            )));
        }
        matrices.push(m);
    }
    Ok(BigradedMap { tensor, matrices })
}

/// `H^n(A x B) ≅ ⊕ H^i(A) ⊗ H^j(B)` for the product built by
/// [`GroupTable::direct_product`].
pub fn kunneth_split(
    res_a: &MinimalResolution,
    res_b: &MinimalResolution,
    res_ab: &MinimalResolution,
) -> Result<BigradedMap> {
    let identity: Vec<usize> = (0..res_ab.order()).collect();
    kunneth_comparison(res_a, res_b, &identity, res_ab)
}

/// `μ*: H*(G) -> H*(G) ⊗ H*(C)` induced by multiplication `G x C -> G`, in
/// Künneth coordinates. Lifting from the tensor product of resolutions
/// avoids resolving `G x C` itself.
pub fn mu_star(res_g: &MinimalResolution, c: &Subgroup, res_c: &MinimalResolution) -> Result<BigradedMap> {
    let g = res_g.group();
    let c = g.subgroup(c.elements())?;
    check_subgroup_resolution(res_g, &c, res_c)?;
    if !c.is_subset_of(&g.centre()) {
        return Err(Error::InvalidInput("multiplication G x C -> G needs C central".into()));
    }
    let top = res_g.maxdeg().min(res_c.maxdeg());
    let tensor = tensor_complex(res_g, res_c, top)?;
    let nc = c.order();
    let mu: Vec<usize> = (0..g.order() * nc)
        .map(|i| g.mul(i / nc, c.elements()[i % nc]))
        .collect();
    let map = lift_chain_map(
        &tensor.complex,
        &mu,
        res_g,
        0,
        vec![BitVec::unit(g.order(), 0)],
        top,
        LiftStrategy::Canonical,
    )?;
    let matrices = (0..=top).map(|n| map.cochain_matrix(n, res_g.rank(n))).collect();
    Ok(BigradedMap { tensor, matrices })
}

/// Outcome of the counit identities for `μ*`, degree by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounitReport {
    pub identity_ok: bool,
    pub restriction_ok: bool,
    pub injective: bool,
    pub first_failure: Option<usize>,
}

impl CounitReport {
    pub fn ok(&self) -> bool {
        self.identity_ok && self.restriction_ok && self.injective
    }
}

/// Checks `(Id ⊗ ε) μ* = Id`, `(ε ⊗ Id) μ* = Res^G_C` and injectivity. The
/// augmentations are restrictions to the trivial subgroup.
pub fn check_counits(mu: &BigradedMap, res_to_c: &RingMap, eps_g: &RingMap, eps_c: &RingMap) -> Result<CounitReport> {
    let mut report = CounitReport {
        identity_ok: true,
        restriction_ok: true,
        injective: true,
        first_failure: None,
    };
    // H^n of the trivial group vanishes for n > 0.
    if eps_c.matrices[1..]
        .iter()
        .chain(&eps_g.matrices[1..])
        .any(|m| m.rows() != 0)
    {
        return Err(Error::Integrity(
            "augmentation target is nonzero in positive degree".into(),
        ));
    }
    for n in 0..=mu.maxdeg() {
        let rank_g = mu.matrices[n].cols();
        // ε vanishes in positive degrees, so only the H^n(G) ⊗ H^0(C) and
        // H^0(G) ⊗ H^n(C) components survive.
        let left = eps_c.matrix(0).get(0, 0);
        let id_part = mu.component(n, n);
        let right = eps_g.matrix(0).get(0, 0);
        let res_part = mu.component(n, 0);
        let scale = |m: FpMatrix, s: u32| if s == 1 { m } else { FpMatrix::zeros(m.rows(), m.cols()) };
        let ok_id = scale(id_part, left) == FpMatrix::identity(rank_g);
        let ok_res = scale(res_part, right) == *res_to_c.matrix(n);
        let ok_inj = mu.matrices[n].rank() == rank_g;
        if !(ok_id && ok_res && ok_inj) && report.first_failure.is_none() {
            report.first_failure = Some(n);
        }
        report.identity_ok &= ok_id;
        report.restriction_ok &= ok_res;
        report.injective &= ok_inj;
    }
    Ok(report)
}
