//! Brute-force cohomology from inhomogeneous cochains on G^n with F_2
//! coefficients. Uses only the multiplication table; shares no code with the
//! library's linear algebra or resolutions.

/// Dense F_2 rows, 64 columns per word.
#[derive(Clone)]
pub struct Rows {
    pub ncols: usize,
    pub rows: Vec<Vec<u64>>,
}

impl Rows {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            rows: Vec::new(),
        }
    }

    fn words(&self) -> usize {
        self.ncols.div_ceil(64)
    }

    pub fn push_bits(&mut self, bits: impl IntoIterator<Item = usize>) {
        let mut row = vec![0u64; self.words()];
        for b in bits {
            row[b / 64] ^= 1 << (b % 64);
        }
        self.rows.push(row);
    }

    /// Rank by elimination, keeping at most one pivot row per column.
    pub fn rank(&self) -> usize {
        let mut pivots: Vec<Option<Vec<u64>>> = vec![None; self.ncols];
        let mut rank = 0;
        for row in &self.rows {
            let mut r = row.clone();
            while let Some(col) = lowest_bit(&r) {
                match &pivots[col] {
                    Some(p) => r.iter_mut().zip(p).for_each(|(a, b)| *a ^= b),
                    None => {
                        pivots[col] = Some(r);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        rank
    }

    /// Basis of `{x : row . x = 0 for every row}`.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let mut reduced: Vec<Vec<u64>> = Vec::new();
        let mut pivot_cols: Vec<usize> = Vec::new();
        for row in &self.rows {
            let mut r = row.clone();
            for (p, &c) in reduced.iter().zip(&pivot_cols) {
                if bit(&r, c) {
                    r.iter_mut().zip(p).for_each(|(a, b)| *a ^= b);
                }
            }
            if let Some(c) = lowest_bit(&r) {
                for p in reduced.iter_mut() {
                    if bit(p, c) {
                        p.iter_mut().zip(&r).for_each(|(a, b)| *a ^= b);
                    }
                }
                reduced.push(r);
                pivot_cols.push(c);
            }
        }
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|c| !pivot_cols.contains(c)) {
            let mut v = vec![0u64; self.words()];
            v[free / 64] |= 1 << (free % 64);
            for (p, &c) in reduced.iter().zip(&pivot_cols) {
                if bit(p, free) {
                    v[c / 64] |= 1 << (c % 64);
                }
            }
            out.push(v);
        }
        out
    }
}

fn bit(v: &[u64], i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

fn lowest_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

pub struct Group {
    pub mul: Vec<Vec<usize>>,
}

impl Group {
    pub fn order(&self) -> usize {
        self.mul.len()
    }

    fn identity(&self) -> usize {
        (0..self.order())
            .find(|&e| (0..self.order()).all(|x| self.mul[e][x] == x))
            .unwrap()
    }

    /// Every subgroup, found as a closed subset containing the identity.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        assert!(n <= 16, "subset enumeration is only for tiny groups");
        let e = self.identity();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask >> e & 1 == 0 {
                continue;
            }
            let elems: Vec<usize> = (0..n).filter(|&x| mask >> x & 1 == 1).collect();
            if elems
                .iter()
                .all(|&a| elems.iter().all(|&b| mask >> self.mul[a][b] & 1 == 1))
            {
                out.push(elems);
            }
        }
        out
    }
}

/// Index of an n-tuple of positions in `0..m`, first entry most significant.
fn index(tuple: &[usize], m: usize) -> usize {
    tuple.iter().fold(0, |acc, &t| acc * m + t)
}

fn tuples(m: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..m.pow(n as u32)).map(move |mut k| {
        let mut t = vec![0; n];
        for slot in t.iter_mut().rev() {
            *slot = k % m;
            k /= m;
        }
        t
    })
}

/// Rows of the coboundary `C^n(H) -> C^{n+1}(H)` for the subgroup `h`: the
/// row of `y` in `H^{n+1}` lists the faces of `y`, so `(δf)(y) = row . f`.
pub fn coboundary(g: &Group, h: &[usize], n: usize) -> Rows {
    let m = h.len();
    let pos = |x: usize| h.iter().position(|&e| e == x).expect("closed subset");
    let mut rows = Rows::new(m.pow(n as u32));
    for y in tuples(m, n + 1) {
        let mut faces = Vec::with_capacity(n + 2);
        faces.push(index(&y[1..], m));
        for i in 0..n {
            let mut x = y.clone();
            let product = g.mul[h[y[i]]][h[y[i + 1]]];
            x.splice(i..=i + 1, [pos(product)]);
            faces.push(index(&x, m));
        }
        faces.push(index(&y[..n], m));
        rows.push_bits(faces);
    }
    rows
}

fn coboundary_rank(g: &Group, h: &[usize], n: isize) -> usize {
    if n < 0 {
        0
    } else {
        coboundary(g, h, n as usize).rank()
    }
}

/// dim H^n(G; F_2) = dim C^n - rank δ^n - rank δ^{n-1}.
pub fn cohomology_dim(g: &Group, n: usize) -> usize {
    let all: Vec<usize> = (0..g.order()).collect();
    all.len().pow(n as u32) - coboundary_rank(g, &all, n as isize) - coboundary_rank(g, &all, n as isize - 1)
}

/// Dimension of the classes in H^n(G) whose restriction to every proper
/// subgroup is a coboundary.
pub fn essential_dim(g: &Group, n: usize) -> usize {
    let order = g.order();
    let all: Vec<usize> = (0..order).collect();
    let mut constraints = coboundary(g, &all, n);
    for h in g.subgroups().into_iter().filter(|h| h.len() < order) {
        let m = h.len();
        // Functionals on C^n(H) killing B^n(H): the left kernel of δ^{n-1}.
        let annihilator = if n == 0 {
            vec![vec![1u64]]
        } else {
            let d = coboundary(g, &h, n - 1);
            let mut transposed = Rows::new(m.pow(n as u32));
            for x in 0..m.pow(n as u32 - 1) {
                transposed.push_bits((0..d.rows.len()).filter(|&y| bit(&d.rows[y], x)));
            }
            transposed.kernel()
        };
        for phi in annihilator {
            let bits = tuples(m, n)
                .enumerate()
                .filter(|(k, _)| bit(&phi, *k))
                .map(|(_, t)| index(&t.iter().map(|&i| h[i]).collect::<Vec<_>>(), order));
            constraints.push_bits(bits.collect::<Vec<_>>());
        }
    }
    let kept = order.pow(n as u32) - constraints.rank();
    kept - coboundary_rank(g, &all, n as isize - 1)
}
