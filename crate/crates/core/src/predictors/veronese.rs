use std::fmt;

use serde::Serialize;

use crate::binom::binom_i;
use crate::error::{Error, Result};
use crate::koszul::{table_cells, BettiTable, Engine, EngineConfig, TableSource};
use crate::ring::RingContext;

use super::support::{Basis, CellVerdict, SupportPrediction, Verdict};

fn to_i64(x: i128) -> i64 {
    i64::try_from(x).expect("range endpoint fits i64")
}

/// Non-vanishing range of `K_{p,q}(n, b; d)` realised by explicit monomial cocycles:
/// `C(q+d, q) - C(d-b-1, q) - q <= p <= C(n+d, n) - C(d+n-q, n-q) + C(n+b, q+b) - q - 1`.
pub fn veronese_range(n: usize, b: i64, d: u32, q: i64) -> Result<(i64, i64)> {
    let (n_, d_) = (n as i64, d as i64);
    if b < 0 || q < 0 || q > n_ {
        return Err(Error::Precondition(format!("need b >= 0 and 0 <= q <= n, got b={b}, q={q}, n={n}")));
    }
    if d_ < b + q + 1 {
        return Err(Error::Precondition(format!("need d >= b + q + 1, got d={d}, b={b}, q={q}")));
    }
    let lo = binom_i(q + d_, q) - binom_i(d_ - b - 1, q) - q as i128;
    let hi = binom_i(n_ + d_, n_) - binom_i(d_ + n_ - q, n_ - q) + binom_i(n_ + b, q + b) - q as i128 - 1;
    Ok((to_i64(lo), to_i64(hi)))
}

/// Range for a projectively Cohen-Macaulay `X` of degree `deg_x`, dimension
/// `n` and regularity `c`, with `r_d = h0(O_X(d))`:
/// `deg(q+b+1) C(d+q-1, q-1) <= p <= r_d - deg(n+1) - deg(d-q-b) C(d+n-q-1, n-q-1)`.
pub fn cm_range(deg_x: u64, n: usize, c: i64, b: i64, d: u32, q: i64, r_d: i64) -> Result<(i64, i64)> {
    let (n_, d_, g) = (n as i64, d as i64, deg_x as i128);
    if q < 1 || q > n_ - 1 {
        return Err(Error::Precondition(format!("need 1 <= q <= n-1, got q={q}, n={n}")));
    }
    if d_ < b + q + c + 1 {
        return Err(Error::Precondition(format!(
            "need d >= b + q + c + 1, got d={d}, b={b}, q={q}, c={c}"
        )));
    }
    let r_prime = r_d as i128 - g * (n_ as i128 + 1);
    let lo = g * (q + b + 1) as i128 * binom_i(d_ + q - 1, q - 1);
    let hi = r_prime - g * (d_ - q - b) as i128 * binom_i(d_ + n_ - q - 1, n_ - q - 1);
    Ok((to_i64(lo), to_i64(hi)))
}

/// Writes `b = b' + k d` with `0 <= b' < d`; then `K_{p,q}(b) = K_{p,q+k}(b')`.
pub fn normalize_twist(b: i64, d: u32) -> (i64, i64) {
    let d = d as i64;
    (b.rem_euclid(d), b.div_euclid(d))
}

/// `(r(B), r(K - B), r_d)` for `B = O(b)`, `L = O(d)` on `P^n`
/// (projective dimensions, `-1` for no sections).
pub fn veronese_easy_params(n: usize, b: i64, d: u32) -> (i64, i64, i64) {
    let n_ = n as i64;
    let r_b = binom_i(n_ + b, n_) - 1;
    let r_kmb = binom_i(-1 - b, n_) - 1;
    let r_d = binom_i(n_ + d as i64, n_) - 1;
    (to_i64(r_b), to_i64(r_kmb), to_i64(r_d))
}

/// Bound under which the "d large" extremal-row statements are applied to `P^n`.
///
/// The statements need `d` large relative to the twist in both directions,
/// hence `|b|` rather than `b`.
pub fn easy_proxy_holds(n: usize, b: i64, d: u32) -> bool {
    d as i64 >= b.abs() + n as i64 + 2
}

/// Rows `q = 0` and `q = n + 1` of the extremal-row rule, columns `0..=r_d`.
pub fn easy_support(n: usize, r_b: i64, r_kmb: i64, r_d: i64) -> SupportPrediction {
    let mut s = SupportPrediction::new(format!(
        "extremal rows for n={n}, r(B)={r_b}, r(K-B)={r_kmb}, r_d={r_d}"
    ));
    let top = n as i64 + 1;
    for p in 0..=r_d.max(0) {
        let v0 = if p <= r_b { Verdict::Nonzero } else { Verdict::Zero };
        s.set(p as usize, 0, CellVerdict::new(v0, Basis::Proxy, "easy"));
        let inside = r_d - n as i64 - r_kmb <= p && p <= r_d - n as i64;
        let v1 = if inside { Verdict::Nonzero } else { Verdict::Zero };
        s.set(p as usize, top, CellVerdict::new(v1, Basis::Proxy, "easy"));
    }
    s.notes.push(format!("rows q >= {} vanish", n + 2));
    s
}

fn easy_verdict(ctx: &RingContext, p: usize, q: i64) -> Option<CellVerdict> {
    if !easy_proxy_holds(ctx.n, ctx.b, ctx.d) {
        return None;
    }
    let (r_b, r_kmb, r_d) = veronese_easy_params(ctx.n, ctx.b, ctx.d);
    let top = ctx.n as i64 + 1;
    let p = p as i64;
    let v = if q == 0 {
        p <= r_b
    } else if q == top {
        r_d - ctx.n as i64 - r_kmb <= p && p <= r_d - ctx.n as i64
    } else if q > top {
        false
    } else {
        return None;
    };
    let v = if v { Verdict::Nonzero } else { Verdict::Zero };
    Some(CellVerdict::new(v, Basis::Proxy, "easy"))
}

/// Combined support map for `K_{p,q}(n, b; d)`, every cell with a nonempty
/// middle term. Proved statements win over the proxy rows, which win over
/// the conjecture.
pub fn veronese_support(ctx: RingContext) -> SupportPrediction {
    let engine = Engine::new(ctx, EngineConfig::default());
    let mut s = SupportPrediction::new(format!("support of K_{{p,q}} for {ctx}"));
    let (b0, shift) = normalize_twist(ctx.b, ctx.d);
    if shift != 0 {
        s.notes.push(format!("twist normalised: K_{{p,q}}(b={}) = K_{{p,q{:+}}}(b={b0})", ctx.b, shift));
    }
    if easy_proxy_holds(ctx.n, ctx.b, ctx.d) {
        s.notes.push(format!("extremal rows applied under the proxy d >= |b| + n + 2 ({} >= {})", ctx.d, ctx.b.abs() + ctx.n as i64 + 2));
    } else {
        s.notes.push("extremal rows not applied: d below the proxy bound |b| + n + 2".into());
    }
    for (p, q) in table_cells(&ctx) {
        let e = engine.middle_degree(q);
        if engine.term_dim(p as i64, e) == Some(0) {
            s.set(p, q, CellVerdict::new(Verdict::Zero, Basis::Structural, "empty"));
            continue;
        }
        let qn = q + shift;
        let ranged = veronese_range(ctx.n, b0, ctx.d, qn).ok();
        let easy = easy_verdict(&ctx, p, q);
        let v = match ranged {
            Some((lo, hi)) if (lo..=hi).contains(&(p as i64)) => {
                CellVerdict::new(Verdict::Nonzero, Basis::Theorem, "range")
            }
            Some(_) => match easy {
                Some(e) => e,
                None if (qn == 0 || qn == ctx.n as i64) && easy_proxy_holds(ctx.n, b0, ctx.d) => {
                    CellVerdict::new(Verdict::Zero, Basis::Proxy, "extremal")
                }
                None => CellVerdict::new(Verdict::Zero, Basis::Conjecture, "conj"),
            },
            None => easy.unwrap_or_else(CellVerdict::unknown),
        };
        s.set(p, q, v);
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WatchKind {
    /// Nonzero strictly outside the non-vanishing range: would refute the
    /// conjectured sharpness.
    CounterexampleCandidate,
    /// Zero inside the proved range: the table itself must be wrong.
    TheoremViolation,
    /// Disagreement with an extremal row applied under the proxy bound.
    ProxyMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WatchFinding {
    pub p: usize,
    pub q: i64,
    pub value: u64,
    pub kind: WatchKind,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WatchReport {
    pub cells_checked: usize,
    pub findings: Vec<WatchFinding>,
}

impl WatchReport {
    pub fn candidates(&self) -> impl Iterator<Item = &WatchFinding> {
        self.findings.iter().filter(|f| f.kind == WatchKind::CounterexampleCandidate)
    }

    /// Anything other than proxy mismatches.
    pub fn alarm(&self) -> bool {
        self.findings.iter().any(|f| f.kind != WatchKind::ProxyMismatch)
    }
}

impl fmt::Display for WatchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.findings.is_empty() {
            return writeln!(f, "watch: {} cells checked, nothing to report", self.cells_checked);
        }
        for x in &self.findings {
            let banner = match x.kind {
                WatchKind::CounterexampleCandidate => "!!! COUNTEREXAMPLE CANDIDATE !!!",
                WatchKind::TheoremViolation => "!!! PROVED NON-VANISHING CONTRADICTED !!!",
                WatchKind::ProxyMismatch => "proxy mismatch",
            };
            writeln!(f, "{banner} K_{{{},{}}} = {}: {}", x.p, x.q, x.value, x.detail)?;
        }
        Ok(())
    }
}

/// Compares a complete Veronese table with the support map and reports every
/// cell where they disagree. A conjectured zero that is nonzero is flagged
/// as a counterexample candidate; it is never silently accepted.
pub fn counterexample_watch(table: &BettiTable) -> Result<WatchReport> {
    let TableSource::Veronese(ctx) = table.source else {
        return Err(Error::InvalidParameters("the watch needs a Veronese table".into()));
    };
    let map = veronese_support(ctx);
    let mut report = WatchReport::default();
    let (b0, shift) = normalize_twist(ctx.b, ctx.d);
    for (&(p, q), cell) in &map.cells {
        report.cells_checked += 1;
        let value = table.get(p, q);
        let range_note = || {
            veronese_range(ctx.n, b0, ctx.d, q + shift)
                .map(|(lo, hi)| format!("range [{lo}, {hi}] at b={b0}, q={}", q + shift))
                .unwrap_or_default()
        };
        let kind = match (cell.verdict, cell.basis, value > 0) {
            (Verdict::Zero, Basis::Conjecture, true) => WatchKind::CounterexampleCandidate,
            (Verdict::Zero, Basis::Structural | Basis::Theorem, true) => WatchKind::TheoremViolation,
            (Verdict::Nonzero, Basis::Theorem | Basis::Structural, false) => WatchKind::TheoremViolation,
            (Verdict::Zero, Basis::Proxy, true) | (Verdict::Nonzero, Basis::Proxy, false) => WatchKind::ProxyMismatch,
            _ => continue,
        };
        report.findings.push(WatchFinding {
            p,
            q,
            value,
            kind,
            detail: format!("predicted {:?} [{}]; {}", cell.verdict, cell.tag, range_note()),
        });
    }
    Ok(report)
}
