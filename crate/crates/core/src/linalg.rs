//! Exact dense linear algebra over the prime field F_2.
//!
//! Matrices are stored as bit-packed rows. All matrices act on column
//! vectors: an `r x c` matrix is a linear map `F_2^c -> F_2^r`, and the
//! columns are the images of the source basis vectors.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A packed vector over F_2.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut v = Self::zeros(0);
        for b in bits {
            v.push(b);
        }
        v
    }

    /// Builds a vector from a slice of 0/1 values.
    pub fn from_u8s(bits: &[u8]) -> Self {
        Self::from_bits(bits.iter().map(|&b| b & 1 == 1))
    }

    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = Self { len, words };
        v.clear_tail();
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, bit);
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    /// Inner product over F_2.
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones();
        }
        acc & 1 == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + t)
                }
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_u8s(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// The bits in `[start, start + len)` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        let mut out = BitVec::zeros(len);
        for i in self.iter_ones() {
            if i >= start && i < start + len {
                out.set(i - start, true);
            }
        }
        out
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.words.resize(words_for(self.len + other.len), 0);
        out.len = self.len + other.len;
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for b in self.iter() {
            write!(f, "{}", u8::from(b))?;
        }
        write!(f, "]")
    }
}

/// A dense matrix over F_p, stored row-major as packed rows. Only `p = 2`
/// is supported.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl FpMatrix {
    /// Builds a matrix from row-major entries, validating every entry.
    pub fn new(p: u32, rows: usize, cols: usize, entries: &[u32]) -> Result<Self> {
        if p != 2 {
            return Err(Error::UnsupportedPrime(p));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&e| e >= p) {
            return Err(Error::InvalidInput(format!("entry {bad} not reduced mod {p}")));
        }
        let data = entries
            .chunks(cols.max(1))
            .take(rows)
            .map(|row| BitVec::from_bits(row.iter().map(|&e| e == 1)))
            .collect::<Vec<_>>();
        let data = if cols == 0 { vec![BitVec::zeros(0); rows] } else { data };
        Ok(Self { p, rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            p: 2,
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_rows((0..n).map(|i| BitVec::unit(n, i)).collect(), n)
    }

    /// Builds a matrix whose rows are the given vectors.
    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        Self {
            p: 2,
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    /// Builds a matrix whose columns are the given vectors, i.e. the matrix
    /// of the linear map sending basis vector `j` to `columns[j]`.
    pub fn from_columns(columns: &[BitVec], rows: usize) -> Self {
        Self::from_rows(columns.to_vec(), rows).transpose()
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[BitVec] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.data
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        u32::from(self.data[r].get(c))
    }

    pub fn set(&mut self, r: usize, c: usize, value: u32) {
        self.data[r].set(c, value % 2 == 1);
    }

    pub fn entries(&self) -> Vec<u32> {
        self.data.iter().flat_map(|r| r.iter().map(u32::from)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.iter_ones() {
                out.data[c].set(r, true);
            }
        }
        out
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        BitVec::from_bits(self.data.iter().map(|row| row.dot(v)))
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            for k in row.iter_ones() {
                out.data[r].xor_assign(&other.data[k]);
            }
        }
        Ok(out)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Self::from_rows(data, self.cols))
    }

    pub fn rank(&self) -> usize {
        let mut basis = IncrementalBasis::new(self.cols);
        self.data.iter().filter(|r| basis.insert(r)).count()
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {}x{} over F_{}", self.rows, self.cols, self.p)?;
        for row in &self.data {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// Result of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub reduced: FpMatrix,
    pub pivot_columns: Vec<usize>,
}

/// Reduced row echelon form together with the row operations that produced
/// it. Reusable for many right-hand sides.
#[derive(Clone, Debug)]
pub struct Echelon {
    reduced: FpMatrix,
    pivots: Vec<usize>,
    /// `transform * original = reduced`.
    transform: Vec<BitVec>,
}

impl Echelon {
    pub fn new(m: &FpMatrix) -> Self {
        let rows = m.rows;
        let mut data = m.data.clone();
        let mut transform: Vec<BitVec> = (0..rows).map(|i| BitVec::unit(rows, i)).collect();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..m.cols {
            if next == rows {
                break;
            }
            let Some(found) = (next..rows).find(|&r| data[r].get(col)) else {
                continue;
            };
            data.swap(next, found);
            transform.swap(next, found);
            let (pivot_row, pivot_t) = (data[next].clone(), transform[next].clone());
            for r in 0..rows {
                if r != next && data[r].get(col) {
                    data[r].xor_assign(&pivot_row);
                    transform[r].xor_assign(&pivot_t);
                }
            }
            pivots.push(col);
            next += 1;
        }
        Self {
            reduced: FpMatrix::from_rows(data, m.cols),
            pivots,
            transform,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduced(&self) -> &FpMatrix {
        &self.reduced
    }

    /// Solves `m x = b`. The returned solution is zero in every free
    /// (non-pivot) coordinate.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(
            b.len(),
            self.reduced.rows,
            "right-hand side length must match row count"
        );
        let rank = self.rank();
        // Rows of the transform beyond the rank span the left kernel; b is
        // consistent iff it is orthogonal to all of them.
        if self.transform[rank..].iter().any(|t| t.dot(b)) {
            return None;
        }
        let mut x = BitVec::zeros(self.reduced.cols);
        for (k, &col) in self.pivots.iter().enumerate() {
            if self.transform[k].dot(b) {
                x.set(col, true);
            }
        }
        Some(x)
    }

    /// Basis of the right null space, one vector per free column, ordered by
    /// free column.
    pub fn kernel(&self) -> FpMatrix {
        let cols = self.reduced.cols;
        let mut is_pivot = vec![false; cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let basis = (0..cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVec::unit(cols, free);
                for (k, &pc) in self.pivots.iter().enumerate() {
                    if self.reduced.data[k].get(free) {
                        v.set(pc, true);
                    }
                }
                v
            })
            .collect();
        FpMatrix::from_rows(basis, cols)
    }
}

pub fn rref(m: &FpMatrix) -> Rref {
    let ech = Echelon::new(m);
    Rref {
        rank: ech.rank(),
        pivot_columns: ech.pivots.clone(),
        reduced: ech.reduced,
    }
}

/// Rows form a basis of `{ v : m v = 0 }`.
pub fn kernel_basis(m: &FpMatrix) -> FpMatrix {
    Echelon::new(m).kernel()
}

/// Solves `m x = b` deterministically (pivot-only solution), or `None` if
/// the system is inconsistent.
pub fn solve(m: &FpMatrix, b: &BitVec) -> Result<Option<BitVec>> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            m.rows
        )));
    }
    Ok(Echelon::new(m).solve(b))
}

/// Basis (as rows) of the intersection of the row spaces of `ms`.
pub fn intersect_rowspaces(ms: &[FpMatrix]) -> Result<FpMatrix> {
    let Some(first) = ms.first() else {
        return Err(Error::InvalidInput("intersection of no subspaces".into()));
    };
    let cols = first.cols;
    if let Some(bad) = ms.iter().find(|m| m.cols != cols) {
        return Err(Error::DimensionMismatch(format!(
            "row spaces of width {cols} and {}",
            bad.cols
        )));
    }
    let mut acc = row_basis(first);
    for m in &ms[1..] {
        acc = intersect_two(&acc, &row_basis(m));
        if acc.rows == 0 {
            break;
        }
    }
    Ok(acc)
}

/// Linearly independent rows spanning the row space of `m`.
pub fn row_basis(m: &FpMatrix) -> FpMatrix {
    let mut basis = IncrementalBasis::new(m.cols);
    let rows = m.data.iter().filter(|r| basis.insert(r)).cloned().collect();
    FpMatrix::from_rows(rows, m.cols)
}

// x lies in U ∩ W iff x = a·U = b·W, i.e. (a, b) is in the left kernel of [U; W].
fn intersect_two(u: &FpMatrix, w: &FpMatrix) -> FpMatrix {
    let stacked = u.vstack(w).expect("same width");
    let left_kernel = kernel_basis(&stacked.transpose());
    let rows = left_kernel
        .data
        .iter()
        .map(|coeffs| {
            let mut v = BitVec::zeros(u.cols);
            for i in coeffs.iter_ones().take_while(|&i| i < u.rows) {
                v.xor_assign(&u.data[i]);
            }
            v
        })
        .collect();
    row_basis(&FpMatrix::from_rows(rows, u.cols))
}

/// A growing linearly independent set kept in semi-echelon form, for
/// membership tests and greedy complements.
#[derive(Clone, Debug)]
pub struct IncrementalBasis {
    len: usize,
    vectors: Vec<(usize, BitVec)>,
}

impl IncrementalBasis {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            vectors: Vec::new(),
        }
    }

    pub fn from_rows(m: &FpMatrix) -> Self {
        let mut b = Self::new(m.cols);
        for r in &m.data {
            b.insert(r);
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient(&self) -> usize {
        self.len
    }

    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for (pivot, b) in &self.vectors {
            if v.get(*pivot) {
                v.xor_assign(b);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` if it is independent of the current span; reports whether it
    /// was added.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let r = self.reduce(v);
        match r.first_one() {
            Some(pivot) => {
                self.vectors.push((pivot, r));
                true
            }
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: usize, cols: usize, e: &[u32]) -> FpMatrix {
        FpMatrix::new(2, rows, cols, e).unwrap()
    }

    #[test]
    fn rref_examples() {
        let r = rref(&FpMatrix::identity(2));
        assert_eq!(r.rank, 2);
        assert_eq!(r.reduced, FpMatrix::identity(2));
        assert_eq!(r.pivot_columns, vec![0, 1]);

        assert_eq!(rref(&FpMatrix::zeros(3, 3)).rank, 0);

        let r = rref(&m(2, 2, &[1, 1, 1, 1]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.reduced, m(2, 2, &[1, 1, 0, 0]));

        assert_eq!(rref(&FpMatrix::zeros(0, 0)).rank, 0);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&FpMatrix::identity(2)).rows(), 0);
        assert_eq!(kernel_basis(&FpMatrix::zeros(1, 3)).rows(), 3);
        let k = kernel_basis(&m(2, 3, &[1, 1, 0, 0, 1, 1]));
        assert_eq!(k.rows(), 1);
        assert_eq!(k.row(0).to_u8s(), vec![1, 1, 1]);
    }

    #[test]
    fn intersection_examples() {
        let full = intersect_rowspaces(&[FpMatrix::identity(2), FpMatrix::identity(2)]).unwrap();
        assert_eq!(full.rows(), 2);
        let none = intersect_rowspaces(&[m(1, 2, &[1, 0]), m(1, 2, &[0, 1])]).unwrap();
        assert_eq!(none.rows(), 0);
        let one = intersect_rowspaces(&[m(2, 3, &[1, 1, 0, 0, 0, 1]), m(1, 3, &[1, 1, 1])]).unwrap();
        assert_eq!(one.rows(), 1);
        assert_eq!(one.row(0).to_u8s(), vec![1, 1, 1]);
        assert!(matches!(
            intersect_rowspaces(&[FpMatrix::identity(2), FpMatrix::identity(3)]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn intersection_matches_enumeration() {
        // Brute force over all vectors of F_2^3.
        let a = m(2, 3, &[1, 1, 0, 0, 0, 1]);
        let b = m(1, 3, &[1, 1, 1]);
        let span = |mat: &FpMatrix| -> Vec<u8> {
            (0u8..(1 << mat.rows()))
                .map(|mask| {
                    let mut v = BitVec::zeros(3);
                    for i in 0..mat.rows() {
                        if mask >> i & 1 == 1 {
                            v.xor_assign(mat.row(i));
                        }
                    }
                    v.iter().enumerate().map(|(i, b)| u8::from(b) << i).sum()
                })
                .collect()
        };
        let (sa, sb) = (span(&a), span(&b));
        let common: std::collections::BTreeSet<u8> = sa.iter().copied().filter(|x| sb.contains(x) && *x != 0).collect();
        assert_eq!(common.into_iter().collect::<Vec<_>>(), vec![0b111]);
    }

    #[test]
    fn solve_examples() {
        let x = solve(&FpMatrix::identity(2), &BitVec::from_u8s(&[1, 0])).unwrap();
        assert_eq!(x.unwrap().to_u8s(), vec![1, 0]);
        let none = solve(&FpMatrix::zeros(2, 2), &BitVec::from_u8s(&[0, 1])).unwrap();
        assert!(none.is_none());
        let x = solve(&m(1, 2, &[1, 1]), &BitVec::from_u8s(&[1])).unwrap();
        assert_eq!(x.unwrap().to_u8s(), vec![1, 0]);
        assert!(solve(&FpMatrix::identity(2), &BitVec::zeros(3)).is_err());
    }

    #[test]
    fn rejects_odd_prime_and_bad_entries() {
        assert!(matches!(FpMatrix::new(3, 1, 1, &[1]), Err(Error::UnsupportedPrime(3))));
        assert!(FpMatrix::new(2, 1, 2, &[1, 2]).is_err());
        assert!(FpMatrix::new(2, 2, 2, &[1, 0, 1]).is_err());
    }

    #[test]
    fn bitvec_helpers() {
        let v = BitVec::from_u8s(&[0, 1, 1, 0, 1]);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![1, 2, 4]);
        assert_eq!(v.first_one(), Some(1));
        assert_eq!(v.slice(1, 3).to_u8s(), vec![1, 1, 0]);
        assert_eq!(v.concat(&BitVec::from_u8s(&[1])).to_u8s(), vec![0, 1, 1, 0, 1, 1]);
        let long = BitVec::unit(130, 129);
        assert_eq!(long.iter_ones().collect::<Vec<_>>(), vec![129]);
    }

    fn matrix_strategy(max: usize) -> impl Strategy<Value = FpMatrix> {
        (0..=max, 0..=max)
            .prop_flat_map(|(r, c)| proptest::collection::vec(0u32..2, r * c).prop_map(move |e| m(r, c, &e)))
    }

    proptest! {
        #[test]
        fn rank_nullity(mat in matrix_strategy(64)) {
            let k = kernel_basis(&mat);
            prop_assert_eq!(rref(&mat).rank + k.rows(), mat.cols());
            prop_assert_eq!(k.rank(), k.rows());
            for v in k.row_vecs() {
                prop_assert!(mat.mul_vec(v).is_zero());
            }
        }

        #[test]
        fn rref_is_idempotent(mat in matrix_strategy(24)) {
            let once = rref(&mat);
            let twice = rref(&once.reduced);
            prop_assert_eq!(once.reduced, twice.reduced);
            prop_assert_eq!(once.pivot_columns, twice.pivot_columns);
        }

        #[test]
        fn solve_is_exact(mat in matrix_strategy(32), seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let x0 = BitVec::from_bits((0..mat.cols()).map(|_| rng.gen::<bool>()));
            let b = mat.mul_vec(&x0);
            let x = solve(&mat, &b).unwrap().expect("consistent by construction");
            prop_assert_eq!(mat.mul_vec(&x), b);
        }
    }
}
