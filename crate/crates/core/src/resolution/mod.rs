//! Minimal free resolutions of the trivial module over F_2 G, chain maps
//! between free complexes, and restriction of resolutions to subgroups.

mod action;
pub mod cache;

use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use action::{block_sums, LeftAction};

use crate::error::{Error, Result};
use crate::group::{GroupTable, Subgroup};
use crate::linalg::{BitVec, Echelon, FpMatrix, IncrementalBasis};

/// Default largest module dimension `rank * |G|` a resolution may reach.
pub const DEFAULT_MODULE_CAP: usize = 20_000;

/// Default degree bound by group order.
pub fn default_maxdeg(order: usize) -> usize {
    match order {
        0..=8 => 12,
        9..=16 => 10,
        17..=32 => 8,
        _ => 6,
    }
}

/// A bounded chain complex of free left kG-modules. The degree-n module is
/// free on `ranks[n]` generators; the basis element `x · e_i` has index
/// `i * order + x`. Differentials are recorded by the images of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
    order: usize,
    ranks: Vec<usize>,
    /// `boundary[n][i]` is the image of generator `i` of degree `n` in the
    /// degree `n - 1` module. `boundary[0]` is empty.
    boundary: Vec<Vec<BitVec>>,
}

impl FreeComplex {
    pub fn new(order: usize, ranks: Vec<usize>, boundary: Vec<Vec<BitVec>>) -> Result<Self> {
        if ranks.len() != boundary.len() {
            return Err(Error::DimensionMismatch("ranks and boundaries differ in length".into()));
        }
        for n in 1..ranks.len() {
            if boundary[n].len() != ranks[n] || boundary[n].iter().any(|v| v.len() != ranks[n - 1] * order) {
                return Err(Error::DimensionMismatch(format!(
                    "boundary in degree {n} has the wrong shape"
                )));
            }
        }
        Ok(Self { order, ranks, boundary })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn maxdeg(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks.get(n).copied().unwrap_or(0)
    }

    pub fn dim(&self, n: usize) -> usize {
        self.rank(n) * self.order
    }

    pub fn boundary(&self, n: usize) -> &[BitVec] {
        &self.boundary[n]
    }

    /// Full k-linear matrix of `d_n` (standard orientation, columns indexed
    /// by the basis of the degree-n module).
    pub fn differential_matrix(&self, n: usize, action: &LeftAction) -> FpMatrix {
        let columns: Vec<BitVec> = self.boundary[n]
            .iter()
            .flat_map(|image| (0..self.order).map(move |x| action.act(x, image)))
            .collect();
        FpMatrix::from_columns(&columns, self.dim(n - 1))
    }
}

/// Why a resolution stops short of the requested degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReduced {
    pub requested: usize,
    pub reached: usize,
    pub module_cap: usize,
}

/// A minimal free resolution `P_* -> k` over F_2 G through degree `maxdeg`.
#[derive(Debug)]
pub struct MinimalResolution {
    group: Arc<GroupTable>,
    complex: FreeComplex,
    action: LeftAction,
    reduced: Option<DegreeReduced>,
    solvers: Vec<OnceLock<Echelon>>,
}

fn augmentation_matrix(order: usize) -> FpMatrix {
    let mut row = BitVec::zeros(order);
    for x in 0..order {
        row.set(x, true);
    }
    FpMatrix::from_rows(vec![row], order)
}

impl MinimalResolution {
    pub fn compute(group: Arc<GroupTable>, maxdeg: usize) -> Result<Self> {
        Self::compute_with_cap(group, maxdeg, DEFAULT_MODULE_CAP)
    }

    /// Builds the resolution degree by degree. If a module would exceed
    /// `module_cap` dimensions the resolution stops early and records a
    /// [`DegreeReduced`] outcome.
    pub fn compute_with_cap(group: Arc<GroupTable>, maxdeg: usize, module_cap: usize) -> Result<Self> {
        let order = group.order();
        let action = LeftAction::new(&group);
        let gens = group.burnside_generators();
        let mut ranks = vec![1usize];
        let mut boundary: Vec<Vec<BitVec>> = vec![Vec::new()];
        let mut echelons: Vec<Option<Echelon>> = vec![None];
        let mut reduced = None;

        for n in 0..maxdeg {
            let echelon = if n == 0 {
                Echelon::new(&augmentation_matrix(order))
            } else {
                let complex = FreeComplex {
                    order,
                    ranks: ranks.clone(),
                    boundary: boundary.clone(),
                };
                Echelon::new(&complex.differential_matrix(n, &action))
            };
            let kernel = echelon.kernel();
            if n > 0 {
                echelons.push(Some(echelon));
            }
            let dim = ranks[n] * order;
            let mut basis = IncrementalBasis::new(dim);
            for v in kernel.row_vecs() {
                for &g in &gens {
                    let mut w = action.act(g, v);
                    w.xor_assign(v);
                    basis.insert(&w);
                }
            }
            let new_gens: Vec<BitVec> = kernel.row_vecs().iter().filter(|v| basis.insert(v)).cloned().collect();
            if new_gens.len() * order > module_cap {
                reduced = Some(DegreeReduced {
                    requested: maxdeg,
                    reached: n,
                    module_cap,
                });
                break;
            }
            ranks.push(new_gens.len());
            boundary.push(new_gens);
        }

        let complex = FreeComplex { order, ranks, boundary };
        let solvers: Vec<OnceLock<Echelon>> = echelons
            .into_iter()
            .map(|e| {
                let cell = OnceLock::new();
                if let Some(e) = e {
                    let _ = cell.set(e);
                }
                cell
            })
            .chain(std::iter::repeat_with(OnceLock::new))
            .take(complex.maxdeg() + 1)
            .collect();
        Ok(Self {
            group,
            complex,
            action,
            reduced,
            solvers,
        })
    }

    /// Reassembles a resolution from stored data; callers must revalidate.
    pub fn from_parts(group: Arc<GroupTable>, complex: FreeComplex) -> Result<Self> {
        if complex.order != group.order() {
            return Err(Error::DimensionMismatch("complex and group orders differ".into()));
        }
        let action = LeftAction::new(&group);
        let solvers = (0..=complex.maxdeg()).map(|_| OnceLock::new()).collect();
        Ok(Self {
            group,
            complex,
            action,
            reduced: None,
            solvers,
        })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn complex(&self) -> &FreeComplex {
        &self.complex
    }

    pub fn action(&self) -> &LeftAction {
        &self.action
    }

    pub fn maxdeg(&self) -> usize {
        self.complex.maxdeg()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.complex.ranks
    }

    pub fn rank(&self, n: usize) -> usize {
        self.complex.rank(n)
    }

    pub fn degree_reduced(&self) -> Option<&DegreeReduced> {
        self.reduced.as_ref()
    }

    pub fn order(&self) -> usize {
        self.complex.order
    }

    /// Echelon form of `d_n` for solving lifting problems.
    pub fn solver(&self, n: usize) -> &Echelon {
        assert!(n >= 1 && n <= self.maxdeg());
        self.solvers[n].get_or_init(|| Echelon::new(&self.complex.differential_matrix(n, &self.action)))
    }

    pub fn differential_matrix(&self, n: usize) -> FpMatrix {
        self.complex.differential_matrix(n, &self.action)
    }

    /// Checks `d d = 0`, exactness, minimality and that the induced
    /// differentials on `Hom_kG(P_*, k)` vanish.
    pub fn validate(&self) -> Result<()> {
        let order = self.order();
        let c = &self.complex;
        if c.ranks.first() != Some(&1) {
            return Err(Error::Integrity("rank of P_0 is not 1".into()));
        }
        for n in 1..=c.maxdeg() {
            for (i, image) in c.boundary[n].iter().enumerate() {
                if !self.action.augment(image).is_zero() {
                    return Err(Error::Integrity(format!(
                        "minimality fails: d_{n}(e_{i}) is not in the radical"
                    )));
                }
                if n >= 2 && !self.apply_differential(n - 1, image).is_zero() {
                    return Err(Error::Integrity(format!("d_{} d_{n} (e_{i}) != 0", n - 1)));
                }
            }
        }
        // Exactness: dim ker d_n = rank d_{n+1}, with d_0 the augmentation.
        for n in 0..c.maxdeg() {
            let kernel_dim = if n == 0 {
                order - 1
            } else {
                c.dim(n) - self.solver(n).rank()
            };
            let image_rank = self.solver(n + 1).rank();
            if kernel_dim != image_rank {
                return Err(Error::Integrity(format!(
                    "exactness fails at degree {n}: kernel {kernel_dim}, image {image_rank}"
                )));
            }
        }
        Ok(())
    }

    /// `d_n` applied to an element of `P_n`.
    pub fn apply_differential(&self, n: usize, v: &BitVec) -> BitVec {
        let c = &self.complex;
        let mut out = BitVec::zeros(c.dim(n - 1));
        for bit in v.iter_ones() {
            let (i, x) = (bit / c.order, bit % c.order);
            out.xor_assign(&self.action.act(x, &c.boundary[n][i]));
        }
        out
    }

    /// Matrix of the differential on `Hom_kG(P_*, k)` from degree `n - 1` to
    /// `n`; zero for a minimal resolution.
    pub fn cochain_differential(&self, n: usize) -> FpMatrix {
        let rows: Vec<BitVec> = self.complex.boundary[n]
            .iter()
            .map(|v| self.action.augment(v))
            .collect();
        FpMatrix::from_rows(rows, self.rank(n - 1))
    }

    /// Cohomology dimensions, read off as ranks.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        self.ranks().to_vec()
    }
}

/// A chain map between free complexes, recorded by images of source
/// generators. `images[k][i]` is the image of generator `i` of source
/// degree `shift + k`, an element of the target's degree-k module.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub shift: usize,
    pub images: Vec<Vec<BitVec>>,
    target_order: usize,
}

impl ChainMap {
    pub fn top(&self) -> usize {
        self.images.len() - 1
    }

    /// Induced map on cochains in target degree `k`: a class given by its
    /// values on target generators is sent to its values on source
    /// generators. Rows index source generators, columns target generators.
    pub fn cochain_matrix(&self, k: usize, target_rank: usize) -> FpMatrix {
        let rows: Vec<BitVec> = self.images[k]
            .iter()
            .map(|v| block_sums(v, self.target_order))
            .collect();
        FpMatrix::from_rows(rows, target_rank)
    }
}

/// How chain lifts choose among valid solutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftStrategy {
    /// Pivot-only solutions; reproducible.
    Canonical,
    /// Canonical solution plus a seeded random cycle in every degree.
    Perturbed(u64),
}

/// Lifts along `hom: K -> G` starting from `initial` (images of source
/// generators of degree `shift` in `P_0`), solving
/// `d_k f_k = f_{k-1} d_{shift + k}` degree by degree up to target degree
/// `top`.
pub fn lift_chain_map(
    source: &FreeComplex,
    hom: &[usize],
    target: &MinimalResolution,
    shift: usize,
    initial: Vec<BitVec>,
    top: usize,
    strategy: LiftStrategy,
) -> Result<ChainMap> {
    if hom.len() != source.order() {
        return Err(Error::DimensionMismatch(
            "homomorphism table does not match source group".into(),
        ));
    }
    if shift + top > source.maxdeg() || top > target.maxdeg() {
        return Err(Error::DegreeOutOfRange {
            requested: (shift + top).max(top),
            available: source.maxdeg().min(target.maxdeg() + shift),
        });
    }
    if initial.len() != source.rank(shift) || initial.iter().any(|v| v.len() != target.order()) {
        return Err(Error::DimensionMismatch("initial chain map has the wrong shape".into()));
    }
    let mut rng = match strategy {
        LiftStrategy::Canonical => None,
        LiftStrategy::Perturbed(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let order_k = source.order();
    let action = target.action();
    let mut images = vec![initial];
    if let Some(rng) = rng.as_mut() {
        // Any element of the augmentation ideal may be added in degree 0.
        let radical: Vec<BitVec> = (1..target.order())
            .map(|x| {
                let mut v = BitVec::unit(target.order(), 0);
                v.set(x, true);
                v
            })
            .collect();
        perturb(&mut images[0], &radical, rng);
    }
    for k in 1..=top {
        let previous = &images[k - 1];
        let expanded: Vec<BitVec> = previous
            .par_iter()
            .flat_map_iter(|image| (0..order_k).map(move |x| action.act(hom[x], image)))
            .collect();
        let solver = target.solver(k);
        let target_dim = target.complex().dim(k - 1);
        let mut current: Vec<BitVec> = source.boundary[shift + k]
            .par_iter()
            .enumerate()
            .map(|(i, boundary)| {
                let mut rhs = BitVec::zeros(target_dim);
                for bit in boundary.iter_ones() {
                    rhs.xor_assign(&expanded[bit]);
                }
                solver.solve(&rhs).ok_or_else(|| {
                    Error::Integrity(format!(
                        "chain lift has no solution for generator {i} in degree {k}: target not exact"
                    ))
                })
            })
            .collect::<Result<_>>()?;
        if let Some(rng) = rng.as_mut() {
            let cycles = solver.kernel();
            perturb(&mut current, cycles.row_vecs(), rng);
        }
        images.push(current);
    }
    Ok(ChainMap {
        shift,
        images,
        target_order: target.order(),
    })
}

fn perturb(images: &mut [BitVec], cycles: &[BitVec], rng: &mut ChaCha8Rng) {
    if cycles.is_empty() {
        return;
    }
    for v in images.iter_mut() {
        for c in cycles {
            if rng.gen::<bool>() {
                v.xor_assign(c);
            }
        }
    }
}

/// Chain map lifting the identity of k along a group homomorphism
/// `phi: K -> G`, from the resolution of K to the resolution of G (viewed
/// as kK-modules through `phi`).
pub fn lift_along_hom(
    phi: &[usize],
    res_k: &MinimalResolution,
    res_g: &MinimalResolution,
    top: usize,
) -> Result<ChainMap> {
    if !res_k.group().is_homomorphism_to(phi, res_g.group()) {
        return Err(Error::NotAHomomorphism(format!(
            "{} -> {}",
            res_k.group().name(),
            res_g.group().name()
        )));
    }
    let initial = vec![BitVec::unit(res_g.order(), 0)];
    lift_chain_map(res_k.complex(), phi, res_g, 0, initial, top, LiftStrategy::Canonical)
}

/// A resolution of G regarded as a complex of free kH-modules.
#[derive(Clone, Debug)]
pub struct RestrictedResolution {
    /// The subgroup as an abstract group (index `i` is `subgroup.elements()[i]`).
    pub subgroup_group: Arc<GroupTable>,
    pub subgroup: Subgroup,
    /// Right coset representatives `Hg`; the kH-basis of `P_n` is
    /// `rep_c · e_s`, indexed `s * reps.len() + c`.
    pub coset_reps: Vec<usize>,
    pub complex: FreeComplex,
}

impl RestrictedResolution {
    pub fn ranks(&self) -> &[usize] {
        self.complex.ranks()
    }

    /// kH-coordinates of the G-basis element `x · e_s`: returns
    /// `(generator index, element of H)`.
    pub fn locate(&self, group: &GroupTable, s: usize, x: usize) -> (usize, usize) {
        let (c, h) = self.split(group, x);
        (s * self.coset_reps.len() + c, h)
    }

    /// Writes `x = h · rep_c`.
    fn split(&self, group: &GroupTable, x: usize) -> (usize, usize) {
        for (c, &rep) in self.coset_reps.iter().enumerate() {
            let h = group.mul(x, group.inv(rep));
            if let Ok(i) = self.subgroup.elements().binary_search(&h) {
                return (c, i);
            }
        }
        unreachable!("right cosets cover the group")
    }
}

/// The same chain complex over kH, free of rank `ranks[n] * [G:H]`, with
/// right coset representatives as the kH-basis.
pub fn restrict_to_subgroup(res: &MinimalResolution, h: &Subgroup) -> Result<RestrictedResolution> {
    let group = res.group();
    let h = group.subgroup(h.elements())?;
    let reps = group.right_coset_reps(&h);
    let h_order = h.order();
    let ncos = reps.len();
    let subgroup_group = Arc::new(group.subgroup_group(&h, format!("{}|H{}", group.name(), h_order)));
    let mut restricted = RestrictedResolution {
        subgroup_group,
        subgroup: h,
        coset_reps: reps,
        complex: FreeComplex {
            order: h_order,
            ranks: res.ranks().iter().map(|r| r * ncos).collect(),
            boundary: vec![Vec::new()],
        },
    };
    let order = res.order();
    for n in 1..=res.maxdeg() {
        let dim = restricted.complex.ranks[n - 1] * h_order;
        let mut images = Vec::with_capacity(restricted.complex.ranks[n]);
        for s in 0..res.rank(n) {
            for &rep in &restricted.coset_reps {
                let moved = res.action().act(rep, &res.complex().boundary(n)[s]);
                let mut v = BitVec::zeros(dim);
                for bit in moved.iter_ones() {
                    let (gen, hx) = restricted.locate(group, bit / order, bit % order);
                    v.set(gen * h_order + hx, true);
                }
                images.push(v);
            }
        }
        restricted.complex.boundary.push(images);
    }
    Ok(restricted)
}

/// The tensor product `P ⊗ Q` of resolutions of A and B, a free resolution
/// over `A x B` (element `(a, b)` at index `a * |B| + b`). Degree-n
/// generators are `e_i ⊗ f_j` for `deg e + deg f = n`, ordered by the
/// degree of the first factor, then `i`, then `j`.
#[derive(Clone, Debug)]
pub struct TensorComplex {
    pub complex: FreeComplex,
    /// `layout[n]` lists `(degree of first factor, first rank, second rank)`
    /// for each block of generators in degree n, in order.
    pub layout: Vec<Vec<(usize, usize, usize)>>,
}

impl TensorComplex {
    /// Index of the generator `e_i ⊗ f_j` with `deg e_i = p` in degree `n`.
    pub fn generator_index(&self, n: usize, p: usize, i: usize, j: usize) -> usize {
        let mut offset = 0;
        for &(deg, ra, rb) in &self.layout[n] {
            if deg == p {
                return offset + i * rb + j;
            }
            offset += ra * rb;
        }
        unreachable!("bidegree ({p}, {}) outside the layout", n - p)
    }
}

pub fn tensor_complex(a: &MinimalResolution, b: &MinimalResolution, maxdeg: usize) -> Result<TensorComplex> {
    if maxdeg > a.maxdeg() || maxdeg > b.maxdeg() {
        return Err(Error::DegreeOutOfRange {
            requested: maxdeg,
            available: a.maxdeg().min(b.maxdeg()),
        });
    }
    let (na, nb) = (a.order(), b.order());
    let order = na * nb;
    let layout: Vec<Vec<(usize, usize, usize)>> = (0..=maxdeg)
        .map(|n| (0..=n).map(|p| (p, a.rank(p), b.rank(n - p))).collect())
        .collect();
    let ranks: Vec<usize> = layout
        .iter()
        .map(|blocks| blocks.iter().map(|&(_, ra, rb)| ra * rb).sum())
        .collect();
    let mut tc = TensorComplex {
        complex: FreeComplex {
            order,
            ranks: ranks.clone(),
            boundary: vec![Vec::new()],
        },
        layout,
    };
    for n in 1..=maxdeg {
        let mut images = Vec::with_capacity(ranks[n]);
        for p in 0..=n {
            let q = n - p;
            for i in 0..a.rank(p) {
                for j in 0..b.rank(q) {
                    let mut v = BitVec::zeros(ranks[n - 1] * order);
                    if p > 0 {
                        for bit in a.complex().boundary(p)[i].iter_ones() {
                            let (i2, x) = (bit / na, bit % na);
                            let g = tc.generator_index(n - 1, p - 1, i2, j);
                            v.flip(g * order + x * nb);
                        }
                    }
                    if q > 0 {
                        for bit in b.complex().boundary(q)[j].iter_ones() {
                            let (j2, y) = (bit / nb, bit % nb);
                            let g = tc.generator_index(n - 1, p, i, j2);
                            v.flip(g * order + y);
                        }
                    }
                    images.push(v);
                }
            }
        }
        tc.complex.boundary.push(images);
    }
    Ok(tc)
}
