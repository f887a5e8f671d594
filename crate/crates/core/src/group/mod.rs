//! Finite 2-groups as explicit multiplication tables.

mod catalog;
mod spec;

use std::collections::{BTreeSet, HashSet};

pub use catalog::{catalog, catalog_names, lookup, CatalogEntry};
pub use spec::{load_group, load_group_file, GroupSpec};

use crate::error::{Error, Result};
use crate::linalg::BitVec;

/// Largest order accepted from group files.
pub const MAX_FILE_ORDER: usize = 64;

/// A validated finite p-group. Element 0 is the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    name: String,
    p: u32,
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupTable({}, order {})", self.name, self.order)
    }
}

/// A subgroup of some parent group, as a sorted list of parent element
/// indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            elements: self.elements.iter().copied().filter(|&x| other.contains(x)).collect(),
        }
    }

    fn mask(&self, order: usize) -> BitVec {
        let mut m = BitVec::zeros(order);
        for &x in &self.elements {
            m.set(x, true);
        }
        m
    }
}

fn is_power_of(n: usize, p: usize) -> bool {
    let mut n = n;
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

impl GroupTable {
    /// Validates a full multiplication table. If the identity is not at
    /// index 0 the elements are reindexed so that it is.
    pub fn from_table(name: impl Into<String>, p: u32, rows: &[Vec<usize>]) -> Result<Self> {
        let name = name.into();
        if p != 2 {
            return Err(Error::UnsupportedPrime(p));
        }
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidGroup(format!("{name}: empty multiplication table")));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidGroup(format!(
                "{name}: table is not square (row {i} has {} entries, expected {n})",
                r.len()
            )));
        }
        if let Some(bad) = rows.iter().flatten().find(|&&x| x >= n) {
            return Err(Error::InvalidGroup(format!(
                "{name}: closure fails, entry {bad} is not an element index below {n}"
            )));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| rows[e][g] == g && rows[g][e] == g))
            .ok_or_else(|| Error::InvalidGroup(format!("{name}: identity axiom fails, no two-sided identity")))?;
        // Latin square check: every row and column is a permutation.
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                seen_row[rows[i][j]] = true;
                seen_col[rows[j][i]] = true;
            }
            if seen_row.contains(&false) || seen_col.contains(&false) {
                return Err(Error::InvalidGroup(format!(
                    "{name}: inverse axiom fails, row or column {i} is not a permutation"
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = rows[a][b];
                for c in 0..n {
                    if rows[ab][c] != rows[a][rows[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "{name}: associativity fails for ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        if !is_power_of(n, p as usize) {
            return Err(Error::InvalidGroup(format!(
                "{name}: order {n} is not a power of p = {p} (not a {p}-group)"
            )));
        }
        // Reindex by swapping the identity into position 0.
        let relabel = |x: usize| -> usize {
            if x == identity {
                0
            } else if x == 0 {
                identity
            } else {
                x
            }
        };
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[relabel(a) * n + relabel(b)] = relabel(rows[a][b]) as u32;
            }
        }
        Ok(Self::assemble(name, p, n, table))
    }

    // Callers guarantee the group axioms and the identity at index 0.
    fn assemble(name: String, p: u32, order: usize, table: Vec<u32>) -> Self {
        let mut inverses = vec![0u32; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverses[a] = b as u32;
                    break;
                }
            }
        }
        Self {
            name,
            p,
            order,
            table,
            inverses,
        }
    }

    pub fn trivial() -> Self {
        Self::assemble("1".into(), 2, 1, vec![0])
    }

    /// Cyclic group of order `n` (a power of 2), elements `0..n` under addition.
    pub fn cyclic(n: usize) -> Result<Self> {
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(format!("C{n}"), 2, &rows)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.order).collect(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![0] }
    }

    /// The subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut elements = vec![0];
        let mut i = 0;
        while i < elements.len() {
            let x = elements[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    elements.push(y);
                }
            }
            i += 1;
        }
        elements.sort_unstable();
        Subgroup { elements }
    }

    /// Validates that `elements` form a subgroup.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut elements = elements.to_vec();
        elements.sort_unstable();
        elements.dedup();
        if elements.iter().any(|&x| x >= self.order) {
            return Err(Error::NotASubgroup(format!(
                "element index out of range for {}",
                self.name
            )));
        }
        let s = Subgroup { elements };
        if !s.contains(0) {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        for &a in s.elements() {
            for &b in s.elements() {
                if !s.contains(self.mul(a, b)) {
                    return Err(Error::NotASubgroup(format!("not closed: {a} * {b}")));
                }
            }
        }
        Ok(s)
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        (0..self.order).all(|g| {
            let gi = self.inv(g);
            h.elements().iter().all(|&x| h.contains(self.mul(self.mul(g, x), gi)))
        })
    }

    /// The subgroup as an abstract group: element `i` corresponds to
    /// `h.elements()[i]`, so the inclusion map is `h.elements()`.
    pub fn subgroup_group(&self, h: &Subgroup, name: impl Into<String>) -> GroupTable {
        let n = h.order();
        let mut table = vec![0u32; n * n];
        for (i, &a) in h.elements().iter().enumerate() {
            for (j, &b) in h.elements().iter().enumerate() {
                let k = h.elements().binary_search(&self.mul(a, b)).expect("closed");
                table[i * n + j] = k as u32;
            }
        }
        Self::assemble(name.into(), self.p, n, table)
    }

    pub fn centre(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.order)
                .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
                .collect(),
        }
    }

    /// The largest central elementary abelian subgroup: central elements of
    /// order dividing p.
    pub fn omega1_centre(&self) -> Subgroup {
        let z = self.centre();
        Subgroup {
            elements: z
                .elements()
                .iter()
                .copied()
                .filter(|&x| self.pow(x, self.p as usize) == 0)
                .collect(),
        }
    }

    /// log_p of the order of an elementary abelian subgroup.
    pub fn elementary_rank(&self, h: &Subgroup) -> usize {
        h.order().trailing_zeros() as usize
    }

    pub fn is_elementary_abelian(&self, h: &Subgroup) -> bool {
        h.elements().iter().all(|&x| self.mul(x, x) == 0)
            && h.elements()
                .iter()
                .all(|&a| h.elements().iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Generators picked greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = self.trivial_subgroup();
        for x in 0..self.order {
            if !current.contains(x) {
                gens.push(x);
                current = self.generate(&gens);
            }
        }
        gens
    }

    /// All homomorphisms `G -> F_2`, as value tables, in a canonical order.
    /// The first entry is the trivial character. This is `H^1(G, F_2)`.
    pub fn characters(&self) -> Vec<Vec<u8>> {
        let gens = self.generators();
        let mut out = Vec::new();
        for assignment in 0u64..(1 << gens.len()) {
            if let Some(chi) = self.extend_character(&gens, assignment) {
                out.push(chi);
            }
        }
        out
    }

    fn extend_character(&self, gens: &[usize], assignment: u64) -> Option<Vec<u8>> {
        let mut value: Vec<Option<u8>> = vec![None; self.order];
        value[0] = Some(0);
        let mut queue = vec![0];
        while let Some(x) = queue.pop() {
            let vx = value[x].expect("assigned");
            for (k, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                let vy = vx ^ ((assignment >> k) & 1) as u8;
                match value[y] {
                    None => {
                        value[y] = Some(vy);
                        queue.push(y);
                    }
                    Some(v) if v != vy => return None,
                    _ => {}
                }
            }
        }
        let chi: Vec<u8> = value.into_iter().map(|v| v.expect("generated")).collect();
        let hom = (0..self.order).all(|a| (0..self.order).all(|b| chi[self.mul(a, b)] == chi[a] ^ chi[b]));
        hom.then_some(chi)
    }

    /// All subgroups of index p, as kernels of the nonzero characters.
    /// Sorted by element list.
    pub fn maximal_subgroups(&self) -> Vec<Subgroup> {
        let mut out: Vec<Subgroup> = self
            .characters()
            .into_iter()
            .filter(|chi| chi.contains(&1))
            .map(|chi| Subgroup {
                elements: (0..self.order).filter(|&x| chi[x] == 0).collect(),
            })
            .collect();
        out.sort();
        out
    }

    /// Frattini subgroup, the intersection of the maximal subgroups.
    pub fn frattini(&self) -> Subgroup {
        self.maximal_subgroups()
            .iter()
            .fold(self.whole(), |acc, m| acc.intersect(m))
    }

    /// Rank of the Frattini quotient G/Φ(G), i.e. the minimal number of
    /// generators.
    pub fn frattini_rank(&self) -> usize {
        self.characters().len().trailing_zeros() as usize
    }

    /// A minimal generating set: elements whose images form a basis of
    /// G/Φ(G), chosen greedily in index order.
    pub fn burnside_generators(&self) -> Vec<usize> {
        let phi = self.frattini();
        let mut gens: Vec<usize> = Vec::new();
        let mut span = phi.clone();
        for x in 0..self.order {
            if !span.contains(x) {
                gens.push(x);
                let mut all = gens.clone();
                all.extend_from_slice(phi.elements());
                span = self.generate(&all);
            }
        }
        gens
    }

    /// Exhaustive enumeration of all subgroups, sorted by (order, elements).
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut seen: HashSet<BitVec> = HashSet::new();
        let mut found = vec![self.trivial_subgroup()];
        seen.insert(found[0].mask(self.order));
        let mut i = 0;
        while i < found.len() {
            let s = found[i].clone();
            for x in 0..self.order {
                if s.contains(x) {
                    continue;
                }
                let mut gens = s.elements().to_vec();
                gens.push(x);
                let t = self.generate(&gens);
                if seen.insert(t.mask(self.order)) {
                    found.push(t);
                }
            }
            i += 1;
        }
        found.sort_by(|a, b| (a.order(), a.elements()).cmp(&(b.order(), b.elements())));
        found
    }

    pub fn proper_subgroups(&self) -> Vec<Subgroup> {
        self.all_subgroups()
            .into_iter()
            .filter(|s| s.order() < self.order)
            .collect()
    }

    /// Least element of each left coset `gH`, sorted.
    pub fn left_coset_reps(&self, h: &Subgroup) -> Vec<usize> {
        self.coset_reps(h, |g, x| self.mul(g, x))
    }

    /// Least element of each right coset `Hg`, sorted.
    pub fn right_coset_reps(&self, h: &Subgroup) -> Vec<usize> {
        self.coset_reps(h, |g, x| self.mul(x, g))
    }

    fn coset_reps(&self, h: &Subgroup, act: impl Fn(usize, usize) -> usize) -> Vec<usize> {
        let mut covered = vec![false; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &x in h.elements() {
                covered[act(g, x)] = true;
            }
        }
        reps
    }

    /// Central subgroups of order p that have a normal complement, paired
    /// with that complement; each pair exhibits `G = K x C_p`.
    pub fn cp_direct_factors(&self) -> Vec<(Subgroup, Subgroup)> {
        let z = self.centre();
        let mut out = Vec::new();
        for &x in z.elements().iter().filter(|&&x| x != 0 && self.mul(x, x) == 0) {
            let n = self.generate(&[x]);
            for k in self.maximal_subgroups() {
                if !k.contains(x) {
                    out.push((n.clone(), k));
                }
            }
        }
        out
    }

    pub fn has_cp_direct_factor(&self) -> bool {
        !self.cp_direct_factors().is_empty()
    }

    /// Whether `C_p x C_p` is a direct factor: normal N ≅ C_p^2 and normal
    /// K with N ∩ K = 1, NK = G and [N, K] = 1. Exhaustive.
    pub fn has_rank2_direct_factor(&self) -> bool {
        let p2 = (self.p * self.p) as usize;
        if self.order < p2 {
            return false;
        }
        let subgroups = self.all_subgroups();
        let normal: Vec<&Subgroup> = subgroups.iter().filter(|s| self.is_normal(s)).collect();
        normal
            .iter()
            .filter(|n| n.order() == p2 && self.is_elementary_abelian(n))
            .any(|n| {
                normal.iter().any(|k| {
                    k.order() * p2 == self.order
                        && n.intersect(k).order() == 1
                        && n.elements()
                            .iter()
                            .all(|&a| k.elements().iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
                })
            })
    }

    /// Direct product with componentwise multiplication; element `(a, b)`
    /// has index `a * |B| + b`.
    pub fn direct_product(a: &GroupTable, b: &GroupTable) -> Result<GroupTable> {
        if a.p != b.p {
            return Err(Error::InvalidInput(format!(
                "direct product of a {}-group and a {}-group",
                a.p, b.p
            )));
        }
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut table = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                let (xa, xb) = (x / nb, x % nb);
                let (ya, yb) = (y / nb, y % nb);
                table[x * n + y] = (a.mul(xa, ya) * nb + b.mul(xb, yb)) as u32;
            }
        }
        Ok(Self::assemble(format!("{}x{}", a.name, b.name), a.p, n, table))
    }

    /// Whether `map` (indexed by elements of `self`) is a homomorphism into
    /// `target`.
    pub fn is_homomorphism_to(&self, map: &[usize], target: &GroupTable) -> bool {
        map.len() == self.order
            && map.iter().all(|&y| y < target.order)
            && (0..self.order).all(|a| (0..self.order).all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b])))
    }

    /// Element lists as a set, for order-independent comparison.
    pub fn subgroup_set(subs: &[Subgroup]) -> BTreeSet<Vec<usize>> {
        subs.iter().map(|s| s.elements.clone()).collect()
    }
}

/// Canonical embeddings of the factors of `direct_product(a, b)`.
pub fn product_embeddings(a: &GroupTable, b: &GroupTable) -> (Vec<usize>, Vec<usize>) {
    let nb = b.order();
    ((0..a.order()).map(|x| x * nb).collect(), (0..nb).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize) -> GroupTable {
        GroupTable::cyclic(n).unwrap()
    }

    #[test]
    fn cyclic_groups() {
        let g = c(2);
        assert_eq!(g.order(), 2);
        assert_eq!(g.centre().order(), 2);
        assert!(GroupTable::cyclic(6).is_err());
    }

    #[test]
    fn identity_is_moved_to_zero() {
        // C2 with the identity stored at index 1.
        let g = GroupTable::from_table("C2", 2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn table_validation_names_the_axiom() {
        let order6: Vec<Vec<usize>> = (0..6).map(|a| (0..6).map(|b| (a + b) % 6).collect()).collect();
        let err = GroupTable::from_table("C6", 2, &order6).unwrap_err().to_string();
        assert!(err.contains("not a 2-group"), "{err}");

        let not_latin = vec![vec![0, 1], vec![1, 1]];
        let err = GroupTable::from_table("bad", 2, &not_latin).unwrap_err().to_string();
        assert!(err.contains("inverse"), "{err}");

        // Latin square with identity whose 2-element products are not associative.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = GroupTable::from_table("loop", 2, &loop5).unwrap_err().to_string();
        assert!(err.contains("associativity"), "{err}");

        assert!(matches!(
            GroupTable::from_table("C3", 3, &[vec![0]]),
            Err(Error::UnsupportedPrime(3))
        ));
    }

    #[test]
    fn centre_and_omega1() {
        let c4 = c(4);
        assert_eq!(c4.omega1_centre().elements(), &[0, 2]);
        assert_eq!(c4.elementary_rank(&c4.omega1_centre()), 1);
        let v4 = GroupTable::direct_product(&c(2), &c(2)).unwrap();
        assert_eq!(v4.omega1_centre().order(), 4);
        assert!(v4.is_elementary_abelian(&v4.whole()));
    }

    #[test]
    fn maximal_subgroups_of_small_groups() {
        assert_eq!(c(4).maximal_subgroups(), vec![Subgroup { elements: vec![0, 2] }]);
        let v4 = GroupTable::direct_product(&c(2), &c(2)).unwrap();
        let m = v4.maximal_subgroups();
        assert_eq!(m.len(), 3);
        assert!(m.iter().all(|s| s.order() == 2));
        assert_eq!(GroupTable::trivial().maximal_subgroups().len(), 0);
    }

    #[test]
    fn maximal_subgroups_match_exhaustive_enumeration() {
        for entry in catalog() {
            let g = &entry.group;
            let by_index: Vec<Subgroup> = g
                .all_subgroups()
                .into_iter()
                .filter(|s| s.order() * 2 == g.order())
                .collect();
            assert_eq!(
                GroupTable::subgroup_set(&g.maximal_subgroups()),
                GroupTable::subgroup_set(&by_index),
                "{}",
                g.name()
            );
            assert_eq!(g.maximal_subgroups().len(), (1 << g.frattini_rank()) - 1);
            assert_eq!(g.burnside_generators().len(), g.frattini_rank());
            assert_eq!(g.generate(&g.burnside_generators()), g.whole());
        }
    }

    #[test]
    fn coset_representatives() {
        let c4 = c(4);
        let h = c4.omega1_centre();
        assert_eq!(c4.left_coset_reps(&h), vec![0, 1]);
        assert_eq!(c4.right_coset_reps(&h), vec![0, 1]);
    }

    #[test]
    fn direct_factor_detection() {
        let c2 = c(2);
        let v4 = GroupTable::direct_product(&c2, &c2).unwrap();
        assert!(v4.has_rank2_direct_factor());
        assert!(!c2.has_rank2_direct_factor());
        let c4c2 = GroupTable::direct_product(&c(4), &c2).unwrap();
        assert!(!c4c2.has_rank2_direct_factor());
        assert!(c4c2.has_cp_direct_factor());
        assert!(!c(4).has_cp_direct_factor());
        assert!(c2.has_cp_direct_factor());
        assert!(!GroupTable::trivial().has_cp_direct_factor());
    }

    #[test]
    fn homomorphism_check() {
        let c4 = c(4);
        let c2 = c(2);
        assert!(c2.is_homomorphism_to(&[0, 2], &c4));
        assert!(!c2.is_homomorphism_to(&[0, 1], &c4));
    }
}
