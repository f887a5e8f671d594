//! Every invariant the engine promises, run per group with a seed for the
//! randomized parts.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::essential::{
    analyse, essential_ideal, ideal_i, ideal_j, regular_element_check, GroupCohomology, HsopSearch, Verdict,
};
use crate::group::GroupTable;
use crate::induced::{restriction, subgroup_resolution};
use crate::linalg::BitVec;
use crate::report::{report_from, EssentialReport};
use crate::resolution::LiftStrategy;
use crate::ring::{hilbert_check, CohClass, RingSlice};

pub const DEFAULT_SEED: u64 = 20_240_601;
/// Random pairs per group for transfer and product identities.
pub const RANDOM_PAIRS: usize = 100;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckFailure {
    pub group: String,
    pub degree: Option<usize>,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupVerification {
    pub group: String,
    pub maxdeg: usize,
    pub checks_run: usize,
    pub failures: Vec<CheckFailure>,
    #[serde(skip)]
    pub report: Option<EssentialReport>,
}

impl GroupVerification {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Recorder {
    group: String,
    checks_run: usize,
    failures: Vec<CheckFailure>,
}

impl Recorder {
    fn check(&mut self, name: &str, degree: Option<usize>, ok: bool, detail: impl FnOnce() -> String) {
        self.checks_run += 1;
        if !ok {
            self.failures.push(CheckFailure {
                group: self.group.clone(),
                degree,
                check: name.to_string(),
                detail: detail(),
            });
        }
    }
}

fn group_seed(seed: u64, name: &str) -> u64 {
    name.bytes().fold(seed ^ 0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
    })
}

fn random_class(ring: &RingSlice, n: usize, rng: &mut ChaCha8Rng) -> CohClass {
    CohClass::new(n, BitVec::from_bits((0..ring.dim(n)).map(|_| rng.gen::<bool>())))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Runs all invariant suites for one group. Engine errors (including cache
/// revalidation failures) are reported as failed checks.
pub fn verify_group(group: Arc<GroupTable>, maxdeg: usize, seed: u64, cache_dir: Option<&Path>) -> GroupVerification {
    let mut rec = Recorder {
        group: group.name().to_string(),
        checks_run: 0,
        failures: Vec::new(),
    };
    let mut report = None;
    let mut reached = maxdeg;
    match run_suites(&group, maxdeg, seed, cache_dir, &mut rec) {
        Ok((r, deg)) => {
            report = Some(r);
            reached = deg;
        }
        Err(e) => {
            let check = match &e {
                Error::Integrity(msg) if msg.starts_with("cache entry") => "cache revalidation",
                Error::Integrity(_) => "engine integrity",
                _ => "engine error",
            };
            rec.check(check, None, false, || e.to_string());
        }
    }
    GroupVerification {
        group: rec.group,
        maxdeg: reached,
        checks_run: rec.checks_run,
        failures: rec.failures,
        report,
    }
}

fn run_suites(
    group: &Arc<GroupTable>,
    maxdeg: usize,
    seed: u64,
    cache_dir: Option<&Path>,
    rec: &mut Recorder,
) -> Result<(EssentialReport, usize)> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(group_seed(seed, group.name()));
    let ctx = GroupCohomology::build(group.clone(), maxdeg, cache_dir)?;
    let g = &ctx.group;
    let top = ctx.maxdeg();
    rec.check("degree bound", None, ctx.res.degree_reduced().is_none(), || {
        format!("resolution stopped at degree {top} of {maxdeg}")
    });

    // Groups.
    let centre = g.centre();
    rec.check(
        "omega1 centre",
        None,
        ctx.centre.is_subset_of(&centre) && g.is_elementary_abelian(&ctx.centre),
        || "Ω₁Z(G) is not an elementary abelian subgroup of Z(G)".into(),
    );
    if g.order() > 1 {
        let r = g.frattini_rank();
        rec.check(
            "maximal subgroup count",
            None,
            ctx.maximal.len() == (1 << r) - 1,
            || format!("{} maximal subgroups, Frattini rank {r}", ctx.maximal.len()),
        );
    }
    let has_cp = g.has_cp_direct_factor();
    if !has_cp {
        for m in &ctx.maximal {
            rec.check(
                "maximal subgroups contain C",
                None,
                ctx.centre.is_subset_of(&m.subgroup),
                || format!("{:?} misses C", m.subgroup.elements()),
            );
        }
    }

    // Resolution: validate() already ran in build; elementary abelian ranks.
    rec.check("resolution integrity", None, true, String::new);
    if g.order() > 1 && g.is_elementary_abelian(&g.whole()) {
        let r = g.elementary_rank(&g.whole());
        for (n, &rank) in ctx.res.ranks().iter().enumerate() {
            let expected = binomial(n + r - 1, r - 1);
            rec.check("elementary abelian ranks", Some(n), rank == expected, || {
                format!("rank {rank}, expected {expected}")
            });
        }
    }
    for n in 1..=top {
        rec.check(
            "cochain differential vanishes",
            Some(n),
            ctx.res.cochain_differential(n).is_zero(),
            || "induced differential on Hom(P, k) is nonzero".into(),
        );
    }

    // Ring structure.
    let ring = &ctx.ring;
    let unit = ring.unit();
    for n in 0..=top {
        for (s, a) in ring.basis(n).iter().enumerate() {
            let ok = ring.cup_product(&unit, a)? == *a && ring.cup_product(a, &unit)? == *a;
            rec.check("unit", Some(n), ok, || format!("1 · e_{s} != e_{s}"));
        }
    }
    for i in 1..=top {
        for j in i..=top - i {
            let table = ring.product_table(i, j)?;
            let swapped = ring.product_table(j, i)?;
            let ok = (0..ring.dim(i)).all(|s| (0..ring.dim(j)).all(|t| table[s][t] == swapped[t][s]));
            rec.check("commutativity", Some(i + j), ok, || format!("H^{i} x H^{j}"));
        }
    }
    for _ in 0..RANDOM_PAIRS {
        let i = rng.gen_range(0..=top);
        let j = rng.gen_range(0..=top - i);
        let k = rng.gen_range(0..=top - i - j);
        let (a, b, c) = (
            random_class(ring, i, &mut rng),
            random_class(ring, j, &mut rng),
            random_class(ring, k, &mut rng),
        );
        let left = ring.cup_product(&ring.cup_product(&a, &b)?, &c)?;
        let right = ring.cup_product(&a, &ring.cup_product(&b, &c)?)?;
        rec.check("associativity", Some(i + j + k), left == right, || {
            format!("degrees ({i}, {j}, {k})")
        });
    }
    if g.order() <= 16 {
        let other = RingSlice::compute_with(ctx.res.clone(), LiftStrategy::Perturbed(rng.gen()))?;
        for i in 0..=top {
            for j in 0..=top - i {
                let ok = ring.product_table(i, j)? == other.product_table(i, j)?;
                rec.check("product independent of lift", Some(i + j), ok, || {
                    format!("H^{i} x H^{j}")
                });
            }
        }
    }

    // Restrictions and transfers.
    let sub_rings: Vec<RingSlice> = ctx
        .maximal
        .iter()
        .map(|m| RingSlice::compute(m.res.clone()))
        .collect::<Result<_>>()?;
    for (m, ring_m) in ctx.maximal.iter().zip(&sub_rings) {
        rec.check(
            "restriction unital",
            Some(0),
            m.restriction.apply(&unit) == ring_m.unit(),
            String::new,
        );
        for n in 0..=top {
            let composite = m.transfer.matrix(n).mul(m.restriction.matrix(n))?;
            rec.check("tr . res = 0", Some(n), composite.is_zero(), || {
                format!("subgroup {:?}", m.subgroup.elements())
            });
        }
    }
    if !ctx.maximal.is_empty() {
        for _ in 0..RANDOM_PAIRS {
            let idx = rng.gen_range(0..ctx.maximal.len());
            let (m, ring_m) = (&ctx.maximal[idx], &sub_rings[idx]);
            let i = rng.gen_range(0..=top);
            let j = rng.gen_range(0..=top - i);
            let a = random_class(ring, i, &mut rng);
            let b = random_class(ring_m, j, &mut rng);
            let lhs = m.transfer.apply(&ring_m.cup_product(&m.restriction.apply(&a), &b)?);
            let rhs = ring.cup_product(&a, &m.transfer.apply(&b))?;
            rec.check("Frobenius reciprocity", Some(i + j), lhs == rhs, || {
                format!("subgroup {:?}, degrees ({i}, {j})", m.subgroup.elements())
            });
            let b2 = random_class(ring, j, &mut rng);
            let lhs = m.restriction.apply(&ring.cup_product(&a, &b2)?);
            let rhs = ring_m.cup_product(&m.restriction.apply(&a), &m.restriction.apply(&b2))?;
            rec.check("restriction multiplicative", Some(i + j), lhs == rhs, || {
                format!("subgroup {:?}", m.subgroup.elements())
            });
            let tr_res = m.transfer.apply(&m.restriction.apply(&a));
            rec.check("tr . res = 0", Some(i), tr_res.is_zero(), || "random class".into());
        }
        // Functoriality through one chain K < M < G.
        let m = &ctx.maximal[0];
        if let Some(k_local) = m.res.group().maximal_subgroups().first() {
            let k_global = g.subgroup(
                &k_local
                    .elements()
                    .iter()
                    .map(|&x| m.subgroup.elements()[x])
                    .collect::<Vec<_>>(),
            )?;
            let rk = subgroup_resolution(&m.res, k_local)?;
            let direct = restriction(&ctx.res, &k_global, &rk)?;
            let via = restriction(&m.res, k_local, &rk)?.compose(&m.restriction)?;
            for n in 0..=top {
                rec.check(
                    "restriction functorial",
                    Some(n),
                    direct.matrix(n) == via.matrix(n),
                    String::new,
                );
            }
        }
    }

    // Comodule structure.
    let mu = ctx.mu_star()?;
    let counits = ctx.counit_report(&mu)?;
    rec.check(
        "counit (Id x eps) mu* = Id",
        counits.first_failure,
        counits.identity_ok,
        String::new,
    );
    rec.check(
        "counit (eps x Id) mu* = Res_C",
        counits.first_failure,
        counits.restriction_ok,
        String::new,
    );
    rec.check(
        "mu* split injective",
        counits.first_failure,
        counits.injective,
        String::new,
    );
    for _ in 0..RANDOM_PAIRS / 2 {
        let i = rng.gen_range(0..=top);
        let j = rng.gen_range(0..=top - i);
        let (a, b) = (random_class(ring, i, &mut rng), random_class(ring, j, &mut rng));
        let lhs = mu.matrices[i + j].mul_vec(&ring.cup_product(&a, &b)?.vector);
        let ua = mu.matrices[i].mul_vec(&a.vector);
        let ub = mu.matrices[j].mul_vec(&b.vector);
        let rhs = mu.bigraded_product(ring, &ctx.centre_ring, (&ua, i), (&ub, j))?;
        rec.check("mu* multiplicative", Some(i + j), lhs == rhs, || {
            format!("degrees ({i}, {j})")
        });
    }

    // Essential ideal and the three ideals.
    let analysis = analyse(&ctx)?;
    let ess = &analysis.ess;
    let i_ideal = ideal_i(&ctx);
    let j_ideal = ideal_j(&ctx)?;
    for m in 0..=top {
        for n in 0..=top - m {
            let ok = j_ideal.classes(m).iter().all(|a| {
                ess.classes(n)
                    .iter()
                    .all(|b| ring.cup_product(a, b).map(|c| c.is_zero()).unwrap_or(false))
            });
            rec.check("J . Ess = 0", Some(m + n), ok, String::new);
        }
    }
    rec.check("J inside I", None, j_ideal.is_subspace_of(&i_ideal), String::new);
    if ctx.centre.order() < g.order() {
        rec.check("Ess inside I", None, ess.is_subspace_of(&i_ideal), String::new);
    }
    for n in 1..=top / 2 {
        for a in ring.basis(n) {
            let sq = ring.cup_product(&a, &a)?;
            let square_dies = ctx.res_to_centre.apply(&sq).is_zero();
            let dies = ctx.res_to_centre.apply(&a).is_zero();
            rec.check("I is radical", Some(n), !square_dies || dies, String::new);
        }
    }
    if g.order() > 1 {
        for (n, restriction_kernel) in essential_ideal(&ctx)?.basis.iter().enumerate() {
            let ok = restriction_kernel
                .row_vecs()
                .iter()
                .all(|v| ctx.maximal.iter().all(|m| m.restriction.matrix(n).mul_vec(v).is_zero()));
            rec.check("Ess restricts to zero", Some(n), ok, String::new);
        }
    }

    // Systems of parameters and the verdict.
    let excluded = g.has_rank2_direct_factor();
    match &analysis.hsop {
        HsopSearch::Found(c) => {
            rec.check("hsop size is d", None, c.classes.len() == ctx.d(), || {
                format!("{} elements, d = {}", c.classes.len(), ctx.d())
            });
            for z in &c.classes {
                rec.check(
                    "hsop element regular",
                    Some(z.degree),
                    regular_element_check(ring, z)?,
                    String::new,
                );
            }
        }
        HsopSearch::NotFound { degree_cap, .. } => {
            rec.check("hsop found", None, ess.is_zero(), || {
                format!("none up to degree {degree_cap}")
            });
        }
    }
    match analysis.verdict {
        Verdict::RelationFound(n) => {
            rec.check("no relation under the hypothesis", Some(n), excluded, || {
                "Ess is not free although G has no rank-2 elementary abelian direct factor".into()
            });
        }
        Verdict::FreeToDegree(n) => {
            if let HsopSearch::Found(c) = &analysis.hsop {
                let gens: Vec<usize> = analysis.generators.iter().map(|e| e.degree).collect();
                let ok = hilbert_check(&ess.dims()[..=n], &gens, &c.degrees());
                rec.check("Hilbert series", Some(n), ok && analysis.hilbert_ok, String::new);
            }
            rec.check(
                "verdict bound",
                Some(n),
                n + analysis_top_degree(&analysis) == top,
                String::new,
            );
        }
        _ => {}
    }

    let report = report_from(&ctx, &analysis, start)?;
    rec.check("subcomodule", None, !report.checks.subcomodule.failed(), String::new);
    rec.check(
        "Künneth containment",
        None,
        !report.checks.kunneth_containment.failed(),
        String::new,
    );
    rec.check("theorem", None, !report.theorem_violation, String::new);
    Ok((report, top))
}

fn analysis_top_degree(a: &crate::essential::Analysis) -> usize {
    match &a.hsop {
        HsopSearch::Found(c) => c.max_degree(),
        HsopSearch::NotFound { .. } => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::lookup;

    #[test]
    fn small_groups_pass() {
        for name in ["C2", "C4", "D8", "Q8", "C2^2"] {
            let v = verify_group(Arc::new(lookup(name).unwrap()), 6, DEFAULT_SEED, None);
            assert!(v.passed(), "{name}: {:?}", v.failures);
            assert!(v.checks_run > 50);
        }
    }

    #[test]
    fn corrupted_cache_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let g = Arc::new(lookup("C4").unwrap());
        crate::resolution::cache::resolve(g.clone(), 4, Some(dir.path())).unwrap();
        let path = crate::resolution::cache::cache_path(dir.path(), &g, 4);
        let text = std::fs::read_to_string(&path)
            .unwrap()
            .replace("\"ranks\":[1,1,1,1,1]", "\"ranks\":[1,1,2,1,1]");
        std::fs::write(&path, text).unwrap();
        let v = verify_group(g, 4, DEFAULT_SEED, Some(dir.path()));
        assert_eq!(v.failures.len(), 1);
        assert_eq!(v.failures[0].check, "cache revalidation");
    }
}
