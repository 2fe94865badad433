//! Brute-force `k_{p,q}` by dense rational elimination.
//!
//! Nothing here touches the engine: monomials, wedge bases, the differential
//! and the row reduction are all rebuilt from scratch, so agreement with the
//! sparse path is meaningful.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::RingContext;

/// Largest middle-term dimension the oracle accepts.
pub const ORACLE_MAX_MIDDLE: usize = 5000;

/// Which coordinate ring the complex is built over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    /// `S/(z_0^d, .., z_n^d)`.
    Reduced,
    /// The full polynomial ring, i.e. the definition of the Veronese groups.
    Unreduced,
}

fn monomials(nvars: usize, deg: i64, cap: Option<u32>) -> Vec<Vec<u32>> {
    fn go(i: usize, left: u32, cap: Option<u32>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            if cap.is_none_or(|c| left < c) {
                cur[i] = left;
                out.push(cur.clone());
            }
            return;
        }
        let top = cap.map_or(left, |c| left.min(c - 1));
        for x in 0..=top {
            cur[i] = x;
            go(i + 1, left - x, cap, cur, out);
        }
    }
    let mut out = Vec::new();
    if deg >= 0 {
        go(0, deg as u32, cap, &mut vec![0; nvars], &mut out);
    }
    out
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= m {
        go(0, m, k, &mut Vec::new(), &mut out);
    }
    out
}

struct Term {
    wedges: Vec<Vec<usize>>,
    mons: Vec<Vec<u32>>,
}

impl Term {
    fn dim(&self) -> usize {
        self.wedges.len() * self.mons.len()
    }
}

/// Dense matrix of `L^k A_d (x) A_e -> L^{k-1} A_d (x) A_{e+d}` (rows = target).
fn dense_map(alpha: &[Vec<u32>], src: &Term, tgt: &Term, cap: Option<u32>) -> Vec<Vec<i64>> {
    let wpos: HashMap<&Vec<usize>, usize> = tgt.wedges.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mpos: HashMap<&Vec<u32>, usize> = tgt.mons.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat = vec![vec![0i64; src.dim()]; tgt.dim()];
    for (wi, w) in src.wedges.iter().enumerate() {
        for (mi, t) in src.mons.iter().enumerate() {
            let col = wi * src.mons.len() + mi;
            for (i, &s) in w.iter().enumerate() {
                let prod: Vec<u32> = alpha[s].iter().zip(t).map(|(a, b)| a + b).collect();
                if cap.is_some_and(|c| prod.iter().any(|&x| x >= c)) {
                    continue;
                }
                let rest: Vec<usize> = w.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
                let row = wpos[&rest] * tgt.mons.len() + mpos[&prod];
                mat[row][col] += if i % 2 == 0 { -1 } else { 1 };
            }
        }
    }
    mat
}

fn dense_rank(mat: Vec<Vec<i64>>) -> usize {
    let mut a: Vec<Vec<BigRational>> = mat
        .into_iter()
        .map(|r| r.into_iter().map(|x| BigRational::from_integer(x.into())).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = BigRational::one() / a[rank][c].clone();
        for x in a[rank].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == rank || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `k_{p,q}` over `Q` from the reduced complex.
pub fn brute_kpq(ctx: RingContext, p: usize, q: i64) -> Result<u64> {
    brute_kpq_with(ctx, p, q, OracleMode::Reduced)
}

pub fn brute_kpq_with(ctx: RingContext, p: usize, q: i64, mode: OracleMode) -> Result<u64> {
    let nv = ctx.n + 1;
    let d = ctx.d as i64;
    let cap = match mode {
        OracleMode::Reduced => Some(ctx.d),
        OracleMode::Unreduced => None,
    };
    let alpha = monomials(nv, d, cap);
    let term = |k: i64, e: i64| -> Term {
        if k < 0 {
            return Term {
                wedges: Vec::new(),
                mons: Vec::new(),
            };
        }
        Term {
            wedges: subsets(alpha.len(), k as usize),
            mons: monomials(nv, e, cap),
        }
    };
    let e = q * d + ctx.b;
    let mid_count = crate::binom::binom(alpha.len() as i64, p as i64)
        .saturating_mul(monomials(nv, e, cap).len() as u128);
    if mid_count > ORACLE_MAX_MIDDLE as u128 {
        return Err(Error::Budget {
            what: format!("oracle middle term of K_{{{p},{q}}}"),
            needed: mid_count,
            cap: ORACLE_MAX_MIDDLE as u128,
        });
    }
    let middle = term(p as i64, e);
    if middle.dim() == 0 {
        return Ok(0);
    }
    let left = term(p as i64 + 1, e - d);
    let right = term(p as i64 - 1, e + d);
    for (name, t) in [("left", &left), ("right", &right)] {
        if t.dim() as u128 * middle.dim() as u128 > 50_000_000 {
            return Err(Error::Budget {
                what: format!("oracle {name} term of K_{{{p},{q}}}"),
                needed: t.dim() as u128 * middle.dim() as u128,
                cap: 50_000_000,
            });
        }
    }
    let r_out = if right.dim() == 0 { 0 } else { dense_rank(dense_map(&alpha, &middle, &right, cap)) };
    let r_in = if left.dim() == 0 { 0 } else { dense_rank(dense_map(&alpha, &left, &middle, cap)) };
    Ok((middle.dim() - r_out - r_in) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize, b: i64, d: u32) -> RingContext {
        RingContext::new(n, b, d).unwrap()
    }

    #[test]
    fn seven_two_cell_is_one() {
        assert_eq!(brute_kpq(ctx(2, 0, 3), 7, 2).unwrap(), 1);
    }

    #[test]
    fn zero_strand() {
        assert_eq!(brute_kpq(ctx(1, 0, 3), 0, 5).unwrap(), 0);
    }

    #[test]
    fn reduced_and_unreduced_agree_on_twisted_cubic() {
        for p in 0..=3 {
            for q in 0..=2 {
                let a = brute_kpq_with(ctx(1, 0, 3), p, q, OracleMode::Reduced).unwrap();
                let b = brute_kpq_with(ctx(1, 0, 3), p, q, OracleMode::Unreduced).unwrap();
                assert_eq!(a, b, "cell ({p},{q})");
            }
        }
    }

    #[test]
    fn twisted_cubic_values() {
        let c = ctx(1, 0, 3);
        assert_eq!(brute_kpq(c, 1, 1).unwrap(), 3);
        assert_eq!(brute_kpq(c, 2, 1).unwrap(), 2);
        assert_eq!(brute_kpq(c, 0, 0).unwrap(), 1);
    }

    #[test]
    fn budget_refusal() {
        assert!(matches!(brute_kpq(ctx(2, 0, 6), 10, 1), Err(Error::Budget { .. })));
    }
}
