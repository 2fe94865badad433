use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The conventional computer-algebra default modulus.
pub const DEFAULT_PRIME: u32 = 32003;

/// Three primes used by multi-prime mode unless overridden.
pub const DEFAULT_PRIMES: [u32; 3] = [32003, 32009, 32027];

/// Field over which an elimination runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldChoice {
    /// `GF(p)` for an odd prime `p < 2^31`.
    Prime(u32),
    Rational,
}

impl FieldChoice {
    /// `GF(p)`, checking that `p` is an odd prime below `2^31`.
    pub fn prime(p: u32) -> Result<Self> {
        if p < 3 || p >= 1 << 31 || !is_prime(p) {
            return Err(Error::InvalidParameters(format!(
                "field modulus must be an odd prime below 2^31, got {p}"
            )));
        }
        Ok(FieldChoice::Prime(p))
    }

    pub fn default_prime() -> Self {
        FieldChoice::Prime(DEFAULT_PRIME)
    }

    /// Textual tag used in exports: `GF(p)` or `Q`.
    pub fn tag(&self) -> String {
        match self {
            FieldChoice::Prime(p) => format!("GF({p})"),
            FieldChoice::Rational => "Q".to_string(),
        }
    }

    /// Parses `Q`, `QQ`, `rational`, a bare prime, or `GF(p)`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "Q" | "QQ" | "q" | "rational" | "rationals" => return Ok(FieldChoice::Rational),
            _ => {}
        }
        let digits = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(t);
        let p: u32 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("unknown field `{s}`")))?;
        FieldChoice::prime(p)
    }
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u32;
    while (i as u64) * (i as u64) <= p as u64 {
        if p % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// Arithmetic used by the elimination routines.
pub trait Field: Sync {
    type Elem: Clone + Send + Sync + fmt::Debug;

    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// Size guard run on freshly produced pivot entries.
    fn check(&self, _a: &Self::Elem) -> Result<()> {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u32) -> Self {
        PrimeField { p: p as u64 }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        // Fermat: a^(p-2)
        let mut base = *a % self.p;
        let mut e = self.p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }
}

/// Exact rationals with a cap on the bit length of numerators and denominators.
#[derive(Clone, Copy, Debug)]
pub struct RationalField {
    pub max_bits: u64,
}

impl Field for RationalField {
    type Elem = BigRational;

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn check(&self, a: &BigRational) -> Result<()> {
        let bits = a.numer().abs().bits().max(a.denom().bits());
        if bits > self.max_bits {
            return Err(Error::ResourceLimit {
                bits,
                max_bits: self.max_bits,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_validation() {
        assert!(FieldChoice::prime(32003).is_ok());
        assert!(FieldChoice::prime(2).is_err());
        assert!(FieldChoice::prime(32001).is_err());
        assert!(FieldChoice::prime(2147483647).is_ok());
        assert!(FieldChoice::prime(4294967291).is_err());
        assert!(FieldChoice::prime(2147483629).is_ok());
        for p in DEFAULT_PRIMES {
            assert!(FieldChoice::prime(p).is_ok());
        }
    }

    #[test]
    fn parse_tags() {
        assert_eq!(FieldChoice::parse("Q").unwrap(), FieldChoice::Rational);
        assert_eq!(FieldChoice::parse("32003").unwrap(), FieldChoice::Prime(32003));
        assert_eq!(FieldChoice::parse("GF(101)").unwrap(), FieldChoice::Prime(101));
        assert!(FieldChoice::parse("R").is_err());
        assert_eq!(FieldChoice::Prime(7).tag(), "GF(7)");
    }

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(32003);
        for a in [1u64, 2, 17, 32002, 12345] {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert_eq!(f.from_i64(-1), 32002);
    }
}
