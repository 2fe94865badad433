//! Monomials with bounded exponents and the graded pieces of the reduced ring
//! `S-bar = k[z_0..z_n] / (z_0^d, ..., z_n^d)`.
//!
//! Bases are listed in lexicographic order of exponent vectors, comparing the
//! exponent of `z_0` first and the exponent of `z_n` last. Matrix layouts,
//! cached ranks and certificate choices all depend on this order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::binom::binom_i;
use crate::error::{Error, Result};

/// Exponent vector of a monomial in `z_0, ..., z_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u16>,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        Monomial { exps }
    }

    /// The constant monomial in `nvars` variables.
    pub fn unit(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    /// Every exponent is at most `d - 1`.
    pub fn is_reduced(&self, d: u32) -> bool {
        self.exps.iter().all(|&e| (e as u32) < d)
    }

    /// `self` divides `other` in the polynomial ring.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Parses the text form `x0^a0*x1^a1*...` (or `1`) in `nvars` variables.
    pub fn parse(s: &str, nvars: usize) -> Result<Self> {
        let s = s.trim();
        let mut exps = vec![0u16; nvars];
        if s == "1" {
            return Ok(Monomial { exps });
        }
        if s.is_empty() {
            return Err(Error::Parse("empty monomial".into()));
        }
        for factor in s.split('*') {
            let factor = factor.trim();
            let rest = factor
                .strip_prefix('x')
                .ok_or_else(|| Error::Parse(format!("factor `{factor}` must start with `x`")))?;
            let (var, exp) = match rest.split_once('^') {
                Some((v, e)) => (v, e),
                None => (rest, "1"),
            };
            let var: usize = var
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable index in `{factor}`")))?;
            let exp: u16 = exp
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
            if var >= nvars {
                return Err(Error::Parse(format!(
                    "variable x{var} out of range for {nvars} variables"
                )));
            }
            exps[var] = exps[var]
                .checked_add(exp)
                .ok_or_else(|| Error::Parse("exponent overflow".into()))?;
        }
        Ok(Monomial { exps })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        // Text form does not record trailing zero exponents; callers re-pad
        // with `with_nvars` once the ambient dimension is known.
        let s = String::deserialize(d)?;
        let max_var = s
            .split('*')
            .filter_map(|f| f.trim().strip_prefix('x'))
            .filter_map(|r| r.split('^').next()?.parse::<usize>().ok())
            .max()
            .map_or(0, |v| v + 1);
        Monomial::parse(&s, max_var.max(1)).map_err(serde::de::Error::custom)
    }
}

impl Monomial {
    /// Pads (or checks) the exponent vector to exactly `nvars` entries.
    pub fn with_nvars(mut self, nvars: usize) -> Result<Self> {
        if self.exps.len() > nvars {
            if self.exps[nvars..].iter().any(|&e| e != 0) {
                return Err(Error::Parse(format!(
                    "monomial {self} uses more than {nvars} variables"
                )));
            }
            self.exps.truncate(nvars);
        }
        self.exps.resize(nvars, 0);
        Ok(self)
    }
}

/// Ambient data `(n, b, d)` of the complex computing `K_{p,q}(n, b; d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingContext {
    pub n: usize,
    pub b: i64,
    pub d: u32,
}

impl RingContext {
    pub fn new(n: usize, b: i64, d: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameters(format!("n must be >= 1, got {n}")));
        }
        if d < 2 {
            return Err(Error::InvalidParameters(format!("d must be >= 2, got {d}")));
        }
        if (n as u64 + 1) * (d as u64 - 1) >= u16::MAX as u64 {
            return Err(Error::InvalidParameters(format!(
                "(n+1)(d-1) must stay below 2^16, got n={n}, d={d}"
            )));
        }
        Ok(RingContext { n, b, d })
    }

    pub fn nvars(&self) -> usize {
        self.n + 1
    }

    /// Top nonzero degree `(n+1)(d-1)` of the reduced ring.
    pub fn top_degree(&self) -> i64 {
        (self.n as i64 + 1) * (self.d as i64 - 1)
    }

    /// Same `n` and `d`, different twist.
    pub fn with_b(&self, b: i64) -> Self {
        RingContext { b, ..*self }
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, b={}, d={})", self.n, self.b, self.d)
    }
}

/// Product in the reduced ring; `None` is the zero element.
pub fn mul_reduced(m1: &Monomial, m2: &Monomial, ctx: &RingContext) -> Option<Monomial> {
    let mut exps = Vec::with_capacity(m1.exps.len());
    for (&a, &b) in m1.exps.iter().zip(&m2.exps) {
        let s = a as u32 + b as u32;
        if s >= ctx.d {
            return None;
        }
        exps.push(s as u16);
    }
    Some(Monomial { exps })
}

/// All reduced monomials of degree `e` in lexicographic order.
pub fn reduced_basis(ctx: &RingContext, e: i64) -> Vec<Monomial> {
    let caps = vec![ctx.d as u16 - 1; ctx.nvars()];
    bounded_monomials(&caps, e)
}

/// Degree-`e` monomials `m` with `m_v <= caps[v]`, lexicographic order.
fn bounded_monomials(caps: &[u16], e: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    if e < 0 || e > caps.iter().map(|&c| c as i64).sum::<i64>() {
        return out;
    }
    // suffix_cap[i] = max total degree achievable by variables i..
    let mut suffix_cap = vec![0i64; caps.len() + 1];
    for i in (0..caps.len()).rev() {
        suffix_cap[i] = suffix_cap[i + 1] + caps[i] as i64;
    }
    let mut cur = vec![0u16; caps.len()];
    fill(caps, &suffix_cap, 0, e, &mut cur, &mut out);
    out
}

fn fill(
    caps: &[u16],
    suffix_cap: &[i64],
    i: usize,
    remaining: i64,
    cur: &mut Vec<u16>,
    out: &mut Vec<Monomial>,
) {
    if i + 1 == caps.len() {
        if remaining <= caps[i] as i64 {
            cur[i] = remaining as u16;
            out.push(Monomial { exps: cur.clone() });
        }
        return;
    }
    let lo = (remaining - suffix_cap[i + 1]).max(0);
    let hi = remaining.min(caps[i] as i64);
    for a in lo..=hi {
        cur[i] = a as u16;
        fill(caps, suffix_cap, i + 1, remaining - a, cur, out);
    }
}

/// `dim S-bar_e` by inclusion-exclusion over the variables hitting the cap.
pub fn reduced_dim(ctx: &RingContext, e: i64) -> u64 {
    if e < 0 {
        return 0;
    }
    let n = ctx.n as i64;
    let d = ctx.d as i64;
    let mut total: i128 = 0;
    let mut j = 0i64;
    while j <= n + 1 && e - j * d >= 0 {
        let term = binom_i(n + 1, j) * binom_i(e - j * d + n, n);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        j += 1;
    }
    total as u64
}

/// Reduced degree-`e` monomials dividing `target`.
pub fn divisors_reduced(target: &Monomial, e: i64, ctx: &RingContext) -> Vec<Monomial> {
    let caps: Vec<u16> = target
        .exps
        .iter()
        .map(|&t| t.min(ctx.d as u16 - 1))
        .collect();
    bounded_monomials(&caps, e)
}

/// Reduced degree-`e` monomials whose product with `target` vanishes.
pub fn annihilators_reduced(target: &Monomial, e: i64, ctx: &RingContext) -> Vec<Monomial> {
    reduced_basis(ctx, e)
        .into_iter()
        .filter(|m| mul_reduced(m, target, ctx).is_none())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(n: usize, d: u32) -> RingContext {
        RingContext::new(n, 0, d).unwrap()
    }

    fn mono(e: &[u16]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn truncated_products() {
        let c = ctx(2, 3);
        assert_eq!(mul_reduced(&mono(&[2, 1, 0]), &mono(&[1, 0, 1]), &c), None);
        assert_eq!(
            mul_reduced(&mono(&[1, 1, 0]), &mono(&[0, 1, 1]), &c),
            Some(mono(&[1, 2, 1]))
        );
        for d in 3..9u16 {
            let c = ctx(2, d as u32);
            let a = mono(&[d - 1, 1, 0]);
            let b = mono(&[d - 2, 0, 2]);
            assert_eq!(mul_reduced(&a, &b, &c), None);
        }
    }

    #[test]
    fn basis_sizes() {
        let c = ctx(2, 3);
        assert_eq!(reduced_basis(&c, 2).len(), 6);
        let cubics = reduced_basis(&c, 3);
        assert_eq!(cubics.len(), 7);
        assert!(!cubics.contains(&mono(&[3, 0, 0])));
        assert!(reduced_basis(&c, 7).is_empty());
        assert!(reduced_basis(&c, -1).is_empty());
        assert_eq!(reduced_dim(&c, 6), 1);
        assert_eq!(reduced_dim(&c, 0), 1);
        assert_eq!(reduced_dim(&c, 3), 7);
        assert_eq!(reduced_dim(&c, -4), 0);
        assert_eq!(reduced_basis(&c, 6), vec![mono(&[2, 2, 2])]);
    }

    #[test]
    fn basis_is_sorted_and_reduced() {
        let c = ctx(3, 4);
        for e in 0..=c.top_degree() {
            let basis = reduced_basis(&c, e);
            assert!(basis.windows(2).all(|w| w[0] < w[1]));
            assert!(basis.iter().all(|m| m.is_reduced(4) && m.degree() as i64 == e));
        }
    }

    #[test]
    fn dim_matches_enumeration_sweep() {
        for n in 1..=3 {
            for d in 2..=8 {
                let c = ctx(n, d);
                for e in 0..=c.top_degree() {
                    assert_eq!(reduced_dim(&c, e) as usize, reduced_basis(&c, e).len());
                    assert_eq!(reduced_dim(&c, e), reduced_dim(&c, c.top_degree() - e));
                    if e < d as i64 {
                        assert_eq!(reduced_dim(&c, e) as i128, binom_i(e + n as i64, n as i64));
                    }
                }
            }
        }
    }

    #[test]
    fn divisor_counts() {
        for d in 3..10u16 {
            let c = ctx(2, d as u32);
            let t = mono(&[d - 1, d - 1, 2]);
            assert_eq!(divisors_reduced(&t, d as i64, &c).len(), 3 * d as usize - 2);
        }
        let c = ctx(2, 3);
        let t = mono(&[2, 2, 2]);
        assert_eq!(divisors_reduced(&t, 3, &c).len(), 7);
        assert_eq!(divisors_reduced(&t, 0, &c), vec![Monomial::unit(3)]);
    }

    #[test]
    fn annihilator_sets() {
        let c = ctx(2, 3);
        let t = mono(&[2, 2, 2]);
        assert_eq!(annihilators_reduced(&t, 3, &c).len(), 7);
        for d in 3..8u32 {
            let c = ctx(2, d);
            assert!(annihilators_reduced(&Monomial::unit(3), d as i64 - 1, &c).is_empty());
        }
        let c = ctx(2, 5);
        let t = mono(&[4, 4, 2]);
        let ann = annihilators_reduced(&t, 5, &c);
        for m in divisors_reduced(&t, 5, &c) {
            assert!(ann.contains(&m));
        }
    }

    #[test]
    fn text_form() {
        let m = mono(&[2, 0, 1, 3]);
        assert_eq!(m.to_string(), "x0^2*x2*x3^3");
        assert_eq!(Monomial::parse("x0^2*x2*x3^3", 4).unwrap(), m);
        assert_eq!(Monomial::parse("x2^1 * x0^2 * x3^3", 4).unwrap(), m);
        assert_eq!(Monomial::unit(3).to_string(), "1");
        assert_eq!(Monomial::parse("1", 3).unwrap(), Monomial::unit(3));
        assert!(Monomial::parse("x5", 3).is_err());
        assert!(Monomial::parse("y1", 3).is_err());
        assert!(Monomial::parse("x1^a", 3).is_err());
    }

    #[test]
    fn context_validation() {
        assert!(RingContext::new(0, 0, 3).is_err());
        assert!(RingContext::new(2, 0, 1).is_err());
        assert_eq!(ctx(2, 3).top_degree(), 6);
    }

    proptest! {
        #[test]
        fn text_round_trip(exps in proptest::collection::vec(0u16..7, 1..6)) {
            let m = Monomial::new(exps.clone());
            prop_assert_eq!(Monomial::parse(&m.to_string(), exps.len()).unwrap(), m);
        }

        #[test]
        fn products_are_exponent_sums(a in proptest::collection::vec(0u16..4, 3), b in proptest::collection::vec(0u16..4, 3)) {
            let c = ctx(2, 4);
            let (ma, mb) = (Monomial::new(a.clone()), Monomial::new(b.clone()));
            match mul_reduced(&ma, &mb, &c) {
                Some(p) => prop_assert!(p.is_reduced(4) && p.degree() == ma.degree() + mb.degree()),
                None => prop_assert!(a.iter().zip(&b).any(|(x, y)| x + y >= 4)),
            }
        }
    }
}
