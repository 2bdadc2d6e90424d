/// Dense boolean matrix over GF(2), rows packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        Self { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    /// Copy keeping only the listed columns, in the listed order.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |r, c| self.get(r, cols[c]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |r, c| self.get(rows[r], c))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    fn xor_rows(&mut self, target: usize, source: usize) {
        let w = self.words;
        let (t, s) = (target * w, source * w);
        for k in 0..w {
            let v = self.data[s + k];
            self.data[t + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words;
        for k in 0..w {
            self.data.swap(a * w + k, b * w + k);
        }
    }

    /// Rank by forward Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(rank, p);
            for r in rank + 1..m.rows {
                if m.get(r, c) {
                    m.xor_rows(r, rank);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }
}

pub fn gf2_rank(m: &BitMatrix) -> usize {
    m.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Column-oriented elimination on plain bool vectors, used as an independent recount.
    fn column_rank(m: &BitMatrix) -> usize {
        let mut cols: Vec<Vec<bool>> = (0..m.cols()).map(|c| (0..m.rows()).map(|r| m.get(r, c)).collect()).collect();
        let mut rank = 0;
        for r in (0..m.rows()).rev() {
            let Some(p) = (rank..cols.len()).find(|&c| cols[c][r]) else {
                continue;
            };
            cols.swap(rank, p);
            for c in 0..cols.len() {
                if c != rank && cols[c][r] {
                    let pivot = cols[rank].clone();
                    cols[c].iter_mut().zip(pivot).for_each(|(x, y)| *x ^= y);
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn small_examples() {
        assert_eq!(gf2_rank(&BitMatrix::identity(7)), 7);
        assert_eq!(gf2_rank(&BitMatrix::from_fn(2, 2, |_, _| true)), 1);
        assert_eq!(gf2_rank(&BitMatrix::zeros(3, 5)), 0);
        // rows 110, 011, 101 sum to zero
        let m = BitMatrix::from_fn(3, 3, |r, c| matches!((r, c), (0, 0) | (0, 1) | (1, 1) | (1, 2) | (2, 0) | (2, 2)));
        assert_eq!(gf2_rank(&m), 2);
    }

    #[test]
    fn random_matches_column_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = BitMatrix::from_fn(30, 30, |_, _| rng.random_bool(0.3));
            assert_eq!(gf2_rank(&m), column_rank(&m));
        }
        let wide = BitMatrix::from_fn(10, 130, |r, c| (r * 7 + c * 3) % 5 == 0);
        assert_eq!(gf2_rank(&wide), column_rank(&wide));
        assert_eq!(gf2_rank(&wide), gf2_rank(&wide.transpose()));
    }

    proptest! {
        #[test]
        fn rank_invariant_under_permutations(bits in proptest::collection::vec(any::<bool>(), 64),
                                             seed in 0u64..10_000) {
            use rand::seq::SliceRandom;
            let m = BitMatrix::from_fn(8, 8, |r, c| bits[r * 8 + c]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rp: Vec<usize> = (0..8).collect();
            let mut cp: Vec<usize> = (0..8).collect();
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            let p = m.select_rows(&rp).select_cols(&cp);
            prop_assert_eq!(gf2_rank(&m), gf2_rank(&p));
        }
    }
}
