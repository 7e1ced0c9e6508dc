//! Dense bit-packed matrices over F2, enough for homology ranks.

#[derive(Debug, Clone)]
pub struct BitMatrix {
    cols: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        BitMatrix { cols, words, rows: vec![vec![0; words]; rows] }
    }

    /// Add 1 to entry (r, c).
    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(c < self.cols);
        self.rows[r][c / 64] ^= 1 << (c % 64);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r][c / 64] >> (c % 64) & 1 == 1
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let (w, bit) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] & bit != 0 {
                    for k in w..self.words {
                        row[k] ^= pivot[k];
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Rank over F2 of the matrix with 1s at the listed (row, col) positions,
/// each listed entry added once (repeats cancel).
pub fn rank_of_entries(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> usize {
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut m = BitMatrix::new(rows, cols);
    for (r, c) in entries {
        m.flip(r, c);
    }
    m.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_ranks() {
        assert_eq!(rank_of_entries(2, 2, [(0, 0), (1, 1)]), 2);
        assert_eq!(rank_of_entries(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]), 1);
        assert_eq!(rank_of_entries(3, 3, [(0, 0), (0, 0)]), 0);
        assert_eq!(rank_of_entries(0, 5, []), 0);
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(entries in prop::collection::vec((0usize..70, 0usize..9), 0..60)) {
            let a = rank_of_entries(70, 9, entries.iter().copied());
            let b = rank_of_entries(9, 70, entries.iter().map(|&(r, c)| (c, r)));
            prop_assert_eq!(a, b);
            prop_assert!(a <= 9);
        }
    }
}
