//! Euler-characteristic checks on Betti tables.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::binom::binom_big;
use crate::error::Result;
use crate::linalg::FieldChoice;
use crate::ring::RingContext;

use super::strand::kpq_dim;
use super::table::{q_bounds, BettiTable, BettiValue, TableSource};

/// Outcome of [`hilbert_check`]: the degrees compared and every mismatch.
#[derive(Clone, Debug, PartialEq)]
pub struct HilbertReport {
    pub passed: bool,
    /// Inclusive range of exponents (or moments) compared.
    pub checked: (i64, i64),
    /// `(degree, table side, expected)` for each disagreement.
    pub mismatches: Vec<(i64, BigRational, BigRational)>,
}

/// Checks a table against the Hilbert function of its module.
///
/// For a Veronese table the alternating sum `sum (-1)^p k_{p,q} t^{p+q}` must
/// equal `(1-t)^N sum_m h0(b + md) t^m` with `N = C(n+d, n)` and `m` running
/// over every weight with `b + md >= 0`. For a two-row table of length `r`
/// the check is the Herzog-Kuhl system `sum (-1)^p k_{p,q} (p+q)^j = 0`,
/// `j < r`, i.e. divisibility by `(1-t)^r`.
pub fn hilbert_check<V: BettiValue>(t: &BettiTable<V>) -> HilbertReport {
    match t.source {
        TableSource::Veronese(ctx) => veronese_check(t, &ctx),
        TableSource::TwoRow { r } => moment_check(t, r),
    }
}

fn h0(ctx: &RingContext, e: i64) -> BigInt {
    if e < 0 {
        BigInt::zero()
    } else {
        binom_big(e + ctx.n as i64, ctx.n as i64)
    }
}

fn veronese_check<V: BettiValue>(t: &BettiTable<V>, ctx: &RingContext) -> HilbertReport {
    let n_sec = binom_big(ctx.n as i64 + ctx.d as i64, ctx.n as i64);
    let big_n: i64 = n_sec.try_into().expect("section count fits i64");
    let d = ctx.d as i64;
    let (qlo, qhi) = q_bounds(ctx);
    let pmax = big_n - ctx.n as i64 - 1;
    let hi = (pmax + qhi).max(t.max_p().unwrap_or(0) as i64 + t.q_range().map_or(qhi, |r| r.1)) + ctx.n as i64 + 1;
    let lo = qlo.min(t.q_range().map_or(qlo, |r| r.0));

    let mut lhs = std::collections::BTreeMap::<i64, BigRational>::new();
    for ((p, q), v) in t.entries() {
        let k = p as i64 + q;
        let term = v.to_rational();
        let slot = lhs.entry(k).or_insert_with(BigRational::zero);
        if p % 2 == 0 {
            *slot += term;
        } else {
            *slot -= term;
        }
    }
    let mut mismatches = Vec::new();
    for k in lo..=hi {
        let mut rhs = BigInt::zero();
        for j in 0..=big_n {
            let c = binom_big(big_n, j) * h0(ctx, ctx.b + (k - j) * d);
            if j % 2 == 0 {
                rhs += c;
            } else {
                rhs -= c;
            }
        }
        let rhs = BigRational::from_integer(rhs);
        let got = lhs.get(&k).cloned().unwrap_or_else(BigRational::zero);
        if got != rhs {
            mismatches.push((k, got, rhs));
        }
    }
    HilbertReport {
        passed: mismatches.is_empty(),
        checked: (lo, hi),
        mismatches,
    }
}

fn moment_check<V: BettiValue>(t: &BettiTable<V>, r: usize) -> HilbertReport {
    let mut mismatches = Vec::new();
    for j in 0..r as u32 {
        let mut s = BigRational::zero();
        for ((p, q), v) in t.entries() {
            let a = BigRational::from_integer(BigInt::from(p as i64 + q));
            let mut term = v.to_rational();
            let mut pw = BigRational::one();
            for _ in 0..j {
                pw *= &a;
            }
            term *= pw;
            if p % 2 == 0 {
                s += term;
            } else {
                s -= term;
            }
        }
        if !s.is_zero() {
            mismatches.push((j as i64, s, BigRational::zero()));
        }
    }
    HilbertReport {
        passed: mismatches.is_empty(),
        checked: (0, r as i64 - 1),
        mismatches,
    }
}

/// `k_{p,q}(n, b; d) == k_{p,q+1}(n, b - d; d)`; returns both sides.
pub fn reindex_check(ctx: RingContext, p: usize, q: i64, f: FieldChoice) -> Result<(bool, u64, u64)> {
    let lhs = kpq_dim(ctx, p, q, f)?;
    let rhs = kpq_dim(ctx.with_b(ctx.b - ctx.d as i64), p, q + 1, f)?;
    Ok((lhs == rhs, lhs, rhs))
}
