//! Colexicographic indexing of `k`-subsets of `{0, .., m-1}`.
//!
//! A strictly increasing tuple `c_0 < c_1 < ... < c_{k-1}` has colex rank
//! `sum_j C(c_j, j+1)`; ranks enumerate the subsets in colex order starting
//! from `{0, .., k-1}`.

/// Binomial table `C(x, j)` for `0 <= x <= m`, `0 <= j <= m`, saturating at `u64::MAX`.
#[derive(Clone, Debug)]
pub struct ColexTable {
    m: usize,
    table: Vec<Vec<u64>>,
}

impl ColexTable {
    pub fn new(m: usize) -> Self {
        let mut table = vec![vec![0u64; m + 2]; m + 1];
        for x in 0..=m {
            table[x][0] = 1;
            for j in 1..=x {
                table[x][j] = table[x - 1][j - 1].saturating_add(if j <= x - 1 { table[x - 1][j] } else { 0 });
            }
        }
        ColexTable { m, table }
    }

    pub fn alphabet_size(&self) -> usize {
        self.m
    }

    /// `C(x, j)`, saturating; zero when `j > x`.
    pub fn binom(&self, x: usize, j: usize) -> u64 {
        if j > x {
            0
        } else {
            self.table[x][j]
        }
    }

    /// Number of `k`-subsets, `None` on overflow or `k > m`.
    pub fn count(&self, k: usize) -> Option<u64> {
        if k > self.m {
            return Some(0);
        }
        let c = self.table[self.m][k];
        (c != u64::MAX).then_some(c)
    }

    pub fn rank(&self, subset: &[u32]) -> u64 {
        subset
            .iter()
            .enumerate()
            .map(|(j, &c)| self.binom(c as usize, j + 1))
            .sum()
    }

    /// Rank of `subset` with the entry at position `skip` removed.
    pub fn rank_without(&self, subset: &[u32], skip: usize) -> u64 {
        let mut r = 0;
        for (j, &c) in subset.iter().enumerate() {
            if j < skip {
                r += self.binom(c as usize, j + 1);
            } else if j > skip {
                r += self.binom(c as usize, j);
            }
        }
        r
    }

    /// Inverse of [`rank`](Self::rank) for `k`-subsets.
    pub fn unrank(&self, mut r: u64, k: usize, out: &mut Vec<u32>) {
        out.clear();
        out.resize(k, 0);
        let mut hi = self.m;
        for j in (1..=k).rev() {
            // largest c < hi with C(c, j) <= r
            let mut c = hi - 1;
            while self.binom(c, j) > r {
                c -= 1;
            }
            out[j - 1] = c as u32;
            r -= self.binom(c, j);
            hi = c;
        }
    }
}

/// Advances `subset` to its colex successor inside `{0, .., m-1}`; false at the end.
pub fn next_colex(subset: &mut [u32], m: usize) -> bool {
    let k = subset.len();
    for i in 0..k {
        let limit = if i + 1 < k { subset[i + 1] } else { m as u32 };
        if subset[i] + 1 < limit {
            subset[i] += 1;
            for (j, s) in subset.iter_mut().enumerate().take(i) {
                *s = j as u32;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_matches_ranks() {
        for m in 0..8 {
            let t = ColexTable::new(m);
            for k in 0..=m {
                let mut s: Vec<u32> = (0..k as u32).collect();
                let mut r = 0u64;
                let mut buf = Vec::new();
                loop {
                    assert_eq!(t.rank(&s), r);
                    t.unrank(r, k, &mut buf);
                    assert_eq!(buf, s);
                    r += 1;
                    if !next_colex(&mut s, m) {
                        break;
                    }
                }
                assert_eq!(Some(r), t.count(k));
            }
        }
    }

    #[test]
    fn rank_without_drops_one_entry() {
        let t = ColexTable::new(9);
        let s = [1u32, 3, 4, 8];
        for skip in 0..4 {
            let mut rest = s.to_vec();
            rest.remove(skip);
            assert_eq!(t.rank_without(&s, skip), t.rank(&rest));
        }
    }

    #[test]
    fn counts() {
        let t = ColexTable::new(7);
        assert_eq!(t.count(7), Some(1));
        assert_eq!(t.count(8), Some(0));
        assert_eq!(t.count(3), Some(35));
        assert_eq!(ColexTable::new(200).count(100), None);
    }
}
