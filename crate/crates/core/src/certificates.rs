//! Monomial cocycles certifying `K_{p,q}(n, b; d) != 0`.
//!
//! A certificate is a single basis element `m_1 ^ .. ^ m_p (x) T` of the
//! reduced complex. If every `m_i` annihilates `T` the element is a cycle,
//! and if moreover the wedge contains every reduced degree-`d` divisor of `T`
//! it cannot be a boundary: a preimage `n_0 ^ .. ^ n_p (x) g` would need
//! `n_0 g = T`, making `n_0` a divisor already present in the wedge. Both
//! conditions are combinatorial, so the conclusion holds over every field.

use serde::{Deserialize, Serialize};

use crate::binom::binom;
use crate::error::{Error, Result};
use crate::koszul::{Engine, EngineConfig};
use crate::linalg::{self, FieldChoice, LinalgConfig};
use crate::ring::{annihilators_reduced, divisors_reduced, mul_reduced, Monomial, RingContext};

/// Cap on the local boundary block used by the linear-algebra cross-check.
const CROSS_CHECK_MAX_COLS: usize = 200_000;
/// Blocks up to this many columns are checked over `Q`.
const RATIONAL_CROSS_CHECK_COLS: usize = 5_000;

/// A wedge-of-monomials cocycle candidate together with its verification flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    pub b: i64,
    pub d: u32,
    pub q: i64,
    /// Homological index, the number of wedge factors.
    pub p: usize,
    pub target: Monomial,
    /// Distinct reduced degree-`d` monomials, in basis order.
    pub wedge: Vec<Monomial>,
    pub is_cycle: bool,
    pub is_combinatorially_nonbounding: bool,
    /// Linear-algebra confirmation, when it was run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear_check: Option<LinearCheck>,
}

/// Outcome of testing the cocycle against the image of the incoming differential.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCheck {
    pub field: String,
    pub in_image: bool,
    /// Size of the local boundary block that was eliminated.
    pub block_rows: usize,
    pub block_cols: usize,
}

impl Certificate {
    pub fn ctx(&self) -> Result<RingContext> {
        RingContext::new(self.n, self.b, self.d)
    }

    /// Certificate from arbitrary parts; flags are left unset until verified.
    pub fn from_parts(ctx: RingContext, q: i64, target: Monomial, mut wedge: Vec<Monomial>) -> Result<Self> {
        check_target(&ctx, q, &target)?;
        for m in &wedge {
            if m.nvars() != ctx.nvars() || !m.is_reduced(ctx.d) || m.degree() != ctx.d {
                return Err(Error::InvalidParameters(format!(
                    "wedge member {m} is not a reduced monomial of degree {} in {} variables",
                    ctx.d,
                    ctx.nvars()
                )));
            }
        }
        wedge.sort();
        let before = wedge.len();
        wedge.dedup();
        if wedge.len() != before {
            return Err(Error::InvalidParameters("wedge members must be distinct".into()));
        }
        Ok(Certificate {
            n: ctx.n,
            b: ctx.b,
            d: ctx.d,
            q,
            p: wedge.len(),
            target,
            wedge,
            is_cycle: false,
            is_combinatorially_nonbounding: false,
            linear_check: None,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Parses the JSON form; monomials are re-padded to `n + 1` variables.
    pub fn from_json(s: &str) -> Result<Self> {
        let mut c: Certificate =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("certificate JSON: {e}")))?;
        let nv = c.n + 1;
        c.target = c.target.with_nvars(nv)?;
        c.wedge = c
            .wedge
            .into_iter()
            .map(|m| m.with_nvars(nv))
            .collect::<Result<_>>()?;
        Ok(c)
    }

    /// Both combinatorial conditions hold.
    pub fn is_valid(&self) -> bool {
        self.is_cycle && self.is_combinatorially_nonbounding
    }
}

fn check_target(ctx: &RingContext, q: i64, target: &Monomial) -> Result<()> {
    if target.nvars() != ctx.nvars() || !target.is_reduced(ctx.d) {
        return Err(Error::InvalidParameters(format!(
            "target {target} is not a reduced monomial in {} variables",
            ctx.nvars()
        )));
    }
    let want = q * ctx.d as i64 + ctx.b;
    if target.degree() as i64 != want {
        return Err(Error::InvalidParameters(format!(
            "target {target} has degree {}, expected qd + b = {want}",
            target.degree()
        )));
    }
    Ok(())
}

/// `z_1^{d-1} .. z_q^{d-1} z_0^{b+q}`.
pub fn default_target(n: usize, b: i64, d: u32, q: i64) -> Result<Monomial> {
    if b < 0 || q < 0 || q > n as i64 {
        return Err(Error::Precondition(format!("need b >= 0 and 0 <= q <= n, got b={b}, q={q}, n={n}")));
    }
    if (d as i64) < b + q + 1 {
        return Err(Error::Precondition(format!("need d >= b + q + 1, got d={d}, b={b}, q={q}")));
    }
    let mut exps = vec![0u16; n + 1];
    exps[0] = (b + q) as u16;
    for e in exps.iter_mut().take(q as usize + 1).skip(1) {
        *e = d as u16 - 1;
    }
    Ok(Monomial::new(exps))
}

/// Annihilators of `target` in degree `d` that do not divide it, in basis order.
pub fn extra_candidates(target: &Monomial, ctx: &RingContext) -> Vec<Monomial> {
    let divs = divisors_reduced(target, ctx.d as i64, ctx);
    annihilators_reduced(target, ctx.d as i64, ctx)
        .into_iter()
        .filter(|m| divs.binary_search(m).is_err())
        .collect()
}

/// Wedge of all degree-`d` divisors of `target` plus the first `extra`
/// non-divisor annihilators.
pub fn build_certificate(target: &Monomial, extra: usize, ctx: RingContext, q: i64) -> Result<Certificate> {
    check_target(&ctx, q, target)?;
    let mut wedge = divisors_reduced(target, ctx.d as i64, &ctx);
    let extras = extra_candidates(target, &ctx);
    if extra > extras.len() {
        return Err(Error::NotEnoughAnnihilators {
            requested: extra,
            available: extras.len(),
        });
    }
    wedge.extend(extras.into_iter().take(extra));
    Certificate::from_parts(ctx, q, target.clone(), wedge)
}

/// Sets the combinatorial flags. Never consults a field.
pub fn verify_certificate(c: &Certificate) -> Result<Certificate> {
    let ctx = c.ctx()?;
    let mut out = Certificate::from_parts(ctx, c.q, c.target.clone(), c.wedge.clone())?;
    out.is_cycle = out
        .wedge
        .iter()
        .all(|m| mul_reduced(m, &out.target, &ctx).is_none());
    let divs = divisors_reduced(&out.target, ctx.d as i64, &ctx);
    let covers = divs.iter().all(|m| out.wedge.binary_search(m).is_ok());
    out.is_combinatorially_nonbounding = out.is_cycle && covers;
    Ok(out)
}

/// Verifies and additionally tests, by exact elimination on the relevant
/// multidegree block of the incoming differential, that the cocycle is not a
/// boundary. Runs over `Q` when the block is small, else over `GF(32003)`.
pub fn verify_certificate_linear(c: &Certificate) -> Result<Certificate> {
    let mut out = verify_certificate(c)?;
    let ctx = out.ctx()?;
    let engine = Engine::new(ctx, EngineConfig::default());
    let idx: Vec<u32> = out
        .wedge
        .iter()
        .map(|m| engine.alphabet().binary_search(m).map(|i| i as u32))
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Internal("wedge member missing from the degree-d basis".into()))?;
    let local = engine.local_boundary(out.q, &idx, &out.target, CROSS_CHECK_MAX_COLS)?;
    let field = if local.matrix.n_cols() <= RATIONAL_CROSS_CHECK_COLS {
        FieldChoice::Rational
    } else {
        FieldChoice::default_prime()
    };
    let mut v = vec![0i64; local.matrix.n_rows()];
    v[local.row] = 1;
    let membership = linalg::in_image_with(&local.matrix, &v, field, &LinalgConfig::default())?;
    out.linear_check = Some(LinearCheck {
        field: field.tag(),
        in_image: membership.member,
        block_rows: local.matrix.n_rows(),
        block_cols: local.matrix.n_cols(),
    });
    Ok(out)
}

/// Number of independent classes obtained by varying the extra annihilators:
/// `C(A - D, p - D)` with `D` divisors and `A` annihilators of degree `d`.
pub fn family_lower_bound(target: &Monomial, p: usize, ctx: &RingContext, q: i64) -> Result<u128> {
    check_target(ctx, q, target)?;
    let dcount = divisors_reduced(target, ctx.d as i64, ctx).len();
    let acount = annihilators_reduced(target, ctx.d as i64, ctx).len();
    if p < dcount || p > acount {
        return Ok(0);
    }
    Ok(binom((acount - dcount) as i64, (p - dcount) as i64))
}
