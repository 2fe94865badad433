use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Sparse integer matrix stored by columns.
///
/// Entries are integers so that one matrix can be reduced into any field;
/// within each column the row indices are strictly increasing and no stored
/// coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    n_rows: usize,
    cols: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        SparseMatrix {
            n_rows,
            cols: vec![Vec::new(); n_cols],
        }
    }

    pub fn identity(k: usize) -> Self {
        SparseMatrix {
            n_rows: k,
            cols: (0..k).map(|i| vec![(i as u32, 1)]).collect(),
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are rejected and
    /// zero values dropped.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        let mut cols: Vec<BTreeMap<u32, i64>> = vec![BTreeMap::new(); n_cols];
        for (r, c, v) in entries {
            if r >= n_rows || c >= n_cols {
                return Err(Error::InvalidParameters(format!(
                    "entry ({r}, {c}) outside a {n_rows}x{n_cols} matrix"
                )));
            }
            if cols[c].insert(r as u32, v).is_some() {
                return Err(Error::InvalidParameters(format!(
                    "duplicate entry at ({r}, {c})"
                )));
            }
        }
        Ok(SparseMatrix {
            n_rows,
            cols: cols
                .into_iter()
                .map(|m| m.into_iter().filter(|&(_, v)| v != 0).collect())
                .collect(),
        })
    }

    /// Builds from columns already sorted by row with no duplicates.
    pub fn from_columns(n_rows: usize, cols: Vec<Vec<(u32, i64)>>) -> Self {
        debug_assert!(cols.iter().all(|c| c.windows(2).all(|w| w[0].0 < w[1].0)));
        debug_assert!(cols.iter().flatten().all(|&(r, v)| (r as usize) < n_rows && v != 0));
        SparseMatrix { n_rows, cols }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn columns(&self) -> &[Vec<(u32, i64)>] {
        &self.cols
    }

    /// `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r as usize, c, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> Self {
        let mut cols = vec![Vec::new(); self.n_rows];
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                cols[r as usize].push((c as u32, v));
            }
        }
        SparseMatrix {
            n_rows: self.cols.len(),
            cols,
        }
    }

    /// Moves row `r` to `row_perm[r]` and column `c` to `col_perm[c]`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        assert_eq!(row_perm.len(), self.n_rows);
        assert_eq!(col_perm.len(), self.cols.len());
        let mut cols = vec![Vec::new(); self.cols.len()];
        for (c, col) in self.cols.iter().enumerate() {
            let mut new: Vec<(u32, i64)> =
                col.iter().map(|&(r, v)| (row_perm[r as usize] as u32, v)).collect();
            new.sort_unstable_by_key(|e| e.0);
            cols[col_perm[c]] = new;
        }
        SparseMatrix {
            n_rows: self.n_rows,
            cols,
        }
    }

    /// Exact integer product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.n_cols() != rhs.n_rows {
            return Err(Error::InvalidParameters(format!(
                "cannot multiply {}x{} by {}x{}",
                self.n_rows,
                self.n_cols(),
                rhs.n_rows,
                rhs.n_cols()
            )));
        }
        let cols = rhs
            .cols
            .iter()
            .map(|rcol| {
                let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
                for &(k, a) in rcol {
                    for &(r, b) in &self.cols[k as usize] {
                        *acc.entry(r).or_insert(0) += a * b;
                    }
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect();
        Ok(SparseMatrix {
            n_rows: self.n_rows,
            cols,
        })
    }

    /// Appends `v` (dense, length `n_rows`) as a last column.
    pub fn with_column(&self, v: &[i64]) -> Self {
        let mut out = self.clone();
        out.cols.push(
            v.iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(r, &x)| (r as u32, x))
                .collect(),
        );
        out
    }

    /// Dense row-major copy; for tests and tiny debugging dumps.
    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.n_cols()]; self.n_rows];
        for (r, c, v) in self.triplets() {
            m[r][c] = v;
        }
        m
    }

    /// Triplet text dump: `rows cols nnz` header, then one `r c value` per line.
    pub fn to_triplet_string(&self) -> String {
        let mut s = format!("{} {} {}\n", self.n_rows, self.n_cols(), self.nnz());
        for (r, c, v) in self.triplets() {
            let _ = writeln!(s, "{r} {c} {v}");
        }
        s
    }

    pub fn write_triplets<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(self.to_triplet_string().as_bytes())
    }

    pub fn read_triplets<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix dump".into()))?
            .map_err(|e| Error::Parse(e.to_string()))?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header `{header}`"))))
            .collect::<Result<_>>()?;
        if h.len() != 3 {
            return Err(Error::Parse(format!("bad header `{header}`")));
        }
        let mut entries = Vec::with_capacity(h[2]);
        for line in lines {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 {
                return Err(Error::Parse(format!("bad entry line `{line}`")));
            }
            let parse = |s: &str| s.parse::<i64>().map_err(|_| Error::Parse(format!("bad number `{s}`")));
            entries.push((parse(t[0])? as usize, parse(t[1])? as usize, parse(t[2])?));
        }
        if entries.len() != h[2] {
            return Err(Error::Parse(format!(
                "header announces {} entries, found {}",
                h[2],
                entries.len()
            )));
        }
        SparseMatrix::from_triplets(h[0], h[1], entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplet_dump_round_trip() {
        let m = SparseMatrix::from_triplets(3, 4, [(0, 1, 2), (2, 3, -1), (1, 0, 5)]).unwrap();
        let s = m.to_triplet_string();
        assert!(s.starts_with("3 4 3\n"));
        let back = SparseMatrix::read_triplets(s.as_bytes()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_duplicates_and_bad_dumps() {
        assert!(SparseMatrix::from_triplets(2, 2, [(0, 0, 1), (0, 0, 2)]).is_err());
        assert!(SparseMatrix::from_triplets(2, 2, [(2, 0, 1)]).is_err());
        assert!(SparseMatrix::read_triplets("2 2 2\n0 0 1\n".as_bytes()).is_err());
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_triplets(2, 2, [(0, 0, 1), (0, 1, 1), (1, 1, 1)]).unwrap();
        let b = SparseMatrix::from_triplets(2, 2, [(0, 0, 1), (0, 1, -1), (1, 1, 1)]).unwrap();
        assert_eq!(a.mul(&b).unwrap(), SparseMatrix::identity(2));
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.transpose().to_dense(), vec![vec![1, 0], vec![1, 1]]);
    }
}
