use crate::group::GroupTable;
use crate::linalg::BitVec;

/// Left multiplication of a group on free kG-modules. A vector of length
/// `rank * |G|` is a list of blocks, one per free generator, with bit `x` of
/// a block standing for the basis element `x · e_i`. `g` maps it to `gx`.
///
/// Blocks never straddle a word boundary because |G| is a power of two no
/// larger than 64, so each block is permuted with a few table lookups.
#[derive(Clone, Debug)]
pub struct LeftAction {
    order: usize,
    chunk: usize,
    chunks: usize,
    tables: Vec<u64>,
}

impl LeftAction {
    pub fn new(group: &GroupTable) -> Self {
        let order = group.order();
        assert!(order <= 64, "block action supports groups of order at most 64");
        let chunk = order.min(8);
        let chunks = order / chunk;
        let mut tables = vec![0u64; (order * chunks) << chunk];
        for g in 0..order {
            for pos in 0..chunks {
                for value in 0..(1usize << chunk) {
                    let mut image = 0u64;
                    for b in 0..chunk {
                        if value >> b & 1 == 1 {
                            image |= 1 << group.mul(g, pos * chunk + b);
                        }
                    }
                    tables[((g * chunks + pos) << chunk) + value] = image;
                }
            }
        }
        Self {
            order,
            chunk,
            chunks,
            tables,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    fn block_mask(&self) -> u64 {
        if self.order == 64 {
            u64::MAX
        } else {
            (1u64 << self.order) - 1
        }
    }

    pub fn act(&self, g: usize, v: &BitVec) -> BitVec {
        if g == 0 {
            return v.clone();
        }
        let n = self.order;
        let mut out = BitVec::zeros(v.len());
        let mask = self.block_mask();
        let chunk_mask = (1u64 << self.chunk) - 1;
        let base = g * self.chunks;
        let words = v.words();
        let out_words = out.words_mut();
        for k in 0..v.len() / n {
            let bit = k * n;
            let (w, sh) = (bit / 64, bit % 64);
            let block = (words[w] >> sh) & mask;
            if block == 0 {
                continue;
            }
            let mut image = 0u64;
            for pos in 0..self.chunks {
                let value = (block >> (pos * self.chunk)) & chunk_mask;
                if value != 0 {
                    image |= self.tables[((base + pos) << self.chunk) + value as usize];
                }
            }
            out_words[w] |= image << sh;
        }
        out
    }

    /// Per-block augmentation: bit `i` is the coefficient sum of block `i`.
    pub fn augment(&self, v: &BitVec) -> BitVec {
        block_sums(v, self.order)
    }
}

/// Coefficient sum of each `order`-sized block of `v`.
pub fn block_sums(v: &BitVec, order: usize) -> BitVec {
    let blocks = v.len() / order;
    let mut out = BitVec::zeros(blocks);
    if order <= 64 {
        let mask = if order == 64 { u64::MAX } else { (1u64 << order) - 1 };
        for k in 0..blocks {
            let bit = k * order;
            let block = (v.words()[bit / 64] >> (bit % 64)) & mask;
            if block.count_ones() & 1 == 1 {
                out.set(k, true);
            }
        }
    } else {
        for i in v.iter_ones() {
            out.flip(i / order);
        }
    }
    out
}
