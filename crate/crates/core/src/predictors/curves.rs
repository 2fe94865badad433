use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::binom::binom_big;
use crate::error::{Error, Result};

use super::support::{Basis, CellVerdict, SupportPrediction, Verdict};

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `k_{p,1}` of a degree-`d` embedding of a genus-`g` curve, for
/// `d >= 2g + 1` and `1 <= p <= d - 2g`:
/// `C(r, p) (-pd/r + (r + 1) - (d + 1 - g)/(p + 1))` with `r = d - g`.
pub fn curve_kp1(g: u64, d: u64, p: u64) -> Result<BigInt> {
    if d < 2 * g + 1 {
        return Err(Error::Precondition(format!("need d >= 2g + 1, got g={g}, d={d}")));
    }
    if p < 1 || p > d - 2 * g {
        return Err(Error::Domain(format!("p={p} outside 1..={}", d - 2 * g)));
    }
    let (g, d, p) = (g as i64, d as i64, p as i64);
    let r = d - g;
    let bracket = -rat(p * d) / rat(r) + rat(r + 1) - rat(d + 1 - g) / rat(p + 1);
    let value = BigRational::from_integer(binom_big(r, p)) * bracket;
    if !value.is_integer() {
        return Err(Error::Internal(format!(
            "curve formula is not integral at g={g}, d={d}, p={p}: {value}"
        )));
    }
    Ok(value.to_integer())
}

/// `round(r/2 + a sqrt(r)/2)`.
pub fn gaussian_index(r: u64, a: f64) -> i64 {
    let r = r as f64;
    (r / 2.0 + a * r.sqrt() / 2.0).round() as i64
}

/// `2^{-r} sqrt(2 pi / r) k_{p,1}` at `p = round(r/2 + a sqrt(r)/2)`, `r = d - g`;
/// tends to `exp(-a^2/2)` as `d` grows.
pub fn curve_gaussian_normalized(g: u64, d: u64, a: f64) -> Result<f64> {
    if d < 2 * g + 1 {
        return Err(Error::Precondition(format!("need d >= 2g + 1, got g={g}, d={d}")));
    }
    let r = d - g;
    let p = gaussian_index(r, a);
    if p < 1 || p as u64 > d - 2 * g {
        return Err(Error::Domain(format!("p_d={p} outside 1..={}", d - 2 * g)));
    }
    let k = curve_kp1(g, d, p as u64)?;
    let scaled = BigRational::new(k, BigInt::one() << r as usize);
    let x = scaled
        .to_f64()
        .ok_or_else(|| Error::Internal("normalised value not representable".into()))?;
    Ok(x * (2.0 * std::f64::consts::PI / r as f64).sqrt())
}

/// Twisting bundle for [`curve_support`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveTwist {
    /// `B = O_C`.
    Trivial,
    /// `B = K_C`.
    Canonical,
}

/// Checks `1 <= gon <= floor((g+3)/2)` and `gon = 1` exactly when `g = 0`.
pub fn validate_gonality(g: u64, gon: u64) -> Result<()> {
    let max = (g + 3) / 2;
    let ok = if g == 0 { gon == 1 } else { (2..=max).contains(&gon) };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!(
            "gonality {gon} is impossible in genus {g} (allowed: {})",
            if g == 0 { "1".to_string() } else { format!("2..={max}") }
        )))
    }
}

/// Support of `K_{p,q}(C, B; L_d)` for a curve of genus `g` and gonality `gon`.
///
/// Rows 0 and 2 follow the extremal-row rule. In row 1 the gonality read-off
/// applies once `d >= 4g - 3`; below that only the part of row 1 forced by
/// the other rows is decided and the rest is unknown.
pub fn curve_support(g: u64, gon: u64, d: u64, twist: CurveTwist) -> Result<SupportPrediction> {
    validate_gonality(g, gon)?;
    if d < 2 * g + 1 {
        return Err(Error::Precondition(format!("need d >= 2g + 1, got g={g}, d={d}")));
    }
    let (gi, goni, r_d) = (g as i64, gon as i64, (d - g) as i64);
    let certified = g == 0 || d + 3 >= 4 * g;
    let (r_b, r_kmb) = match twist {
        CurveTwist::Trivial => (0, gi - 1),
        CurveTwist::Canonical => (gi - 1, 0),
    };
    let name = match twist {
        CurveTwist::Trivial => "O",
        CurveTwist::Canonical => "K",
    };
    let mut s = SupportPrediction::new(format!("support of K_{{p,q}}(C, {name}; L) for g={g}, gon={gon}, deg L={d}"));
    if !certified {
        s.notes.push(format!("d < 4g - 3 = {}: gonality read-off not available", 4 * gi - 3));
    }
    // weight-one row decided by gonality: p in [lo1, hi1]
    let (lo1, hi1) = match twist {
        CurveTwist::Trivial => (1, r_d - goni),
        CurveTwist::Canonical => (goni - 1, r_d - 2),
    };
    // part of row 1 forced by rows 0 and 2
    let (flo, fhi) = (r_b + 1, r_d - 2 - r_kmb);
    for p in 0..=r_d {
        let pu = p as usize;
        let row0 = if p <= r_b { Verdict::Nonzero } else { Verdict::Zero };
        s.set(pu, 0, CellVerdict::new(row0, Basis::Theorem, "easy"));
        let in2 = r_d - 1 - r_kmb <= p && p <= r_d - 1;
        let row2 = if in2 { Verdict::Nonzero } else { Verdict::Zero };
        s.set(pu, 2, CellVerdict::new(row2, Basis::Theorem, "easy"));
        let row1 = if p >= r_d - 1 && twist == CurveTwist::Canonical || p >= r_d {
            CellVerdict::new(Verdict::Zero, Basis::Theorem, "length")
        } else if certified {
            let v = if lo1 <= p && p <= hi1 { Verdict::Nonzero } else { Verdict::Zero };
            CellVerdict::new(v, Basis::Theorem, "gonality")
        } else if flo <= p && p <= fhi {
            CellVerdict::new(Verdict::Nonzero, Basis::Theorem, "weight-one")
        } else if p == 0 {
            CellVerdict::new(Verdict::Zero, Basis::Theorem, "weight-one")
        } else {
            CellVerdict::unknown()
        };
        s.set(pu, 1, row1);
    }
    Ok(s)
}

/// Dual cell: `K_{p,1}(C, B)` and `K_{r_d - 1 - p, 1}(C, K - B)` have equal
/// dimension; returns `(r_d - 1 - p, 2g - 2 - b)` with `r_d = d - g`.
pub fn curve_duality_pair(g: u64, b: i64, d: u64, p: i64) -> (i64, i64) {
    let r_d = d as i64 - g as i64;
    (r_d - 1 - p, 2 * g as i64 - 2 - b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_curves() {
        assert_eq!(curve_kp1(0, 3, 1).unwrap(), BigInt::from(3));
        assert_eq!(curve_kp1(0, 3, 2).unwrap(), BigInt::from(2));
        assert_eq!(curve_kp1(1, 4, 1).unwrap(), BigInt::from(2));
        assert!(curve_kp1(1, 4, 3).is_err());
        assert!(curve_kp1(2, 4, 1).is_err());
    }

    #[test]
    fn rational_normal_curve_binomial_shape() {
        // k_{p,1} of the rational normal curve of degree d is p C(d, p+1)
        for d in 2..30u64 {
            for p in 1..d {
                let want = BigInt::from(p) * binom_big(d as i64, p as i64 + 1);
                assert_eq!(curve_kp1(0, d, p).unwrap(), want, "d={d} p={p}");
            }
        }
    }

    #[test]
    fn integral_everywhere() {
        for g in 0..=10u64 {
            for d in (2 * g + 1)..=200 {
                for p in 1..=(d - 2 * g) {
                    curve_kp1(g, d, p).unwrap();
                }
            }
        }
    }

    #[test]
    fn gaussian_near_one_at_center() {
        // g = 0: k_{40,1} = 40 C(80, 41); the value sits 2.7% below the limit
        let v = curve_gaussian_normalized(0, 80, 0.0).unwrap();
        let k = 40.0 * crate::koszul::rational_f64(&BigRational::from_integer(binom_big(80, 41)));
        let direct = k / 2f64.powi(80) * (2.0 * std::f64::consts::PI / 80.0).sqrt();
        assert!((v - direct).abs() < 1e-12, "{v} vs {direct}");
        assert!((v - 1.0).abs() < 0.03, "{v}");
        let far = curve_gaussian_normalized(0, 1280, 0.0).unwrap();
        assert!((far - 1.0).abs() < 0.002, "{far}");
        assert!(curve_gaussian_normalized(0, 3, 5.0).is_err());
    }

    #[test]
    fn gonality_bounds() {
        assert!(validate_gonality(0, 1).is_ok());
        assert!(validate_gonality(0, 2).is_err());
        assert!(validate_gonality(2, 2).is_ok());
        assert!(validate_gonality(2, 3).is_err());
        assert!(validate_gonality(5, 4).is_ok());
        assert!(validate_gonality(5, 1).is_err());
    }

    #[test]
    fn genus_two_row_one() {
        let s = curve_support(2, 2, 9, CurveTwist::Trivial).unwrap();
        assert_eq!(s.row(1, Verdict::Nonzero), (1..=5).collect::<Vec<_>>());
        assert_eq!(s.row(2, Verdict::Nonzero), vec![5, 6]);
        assert_eq!(s.row(0, Verdict::Nonzero), vec![0]);
    }

    #[test]
    fn hyperelliptic_flag() {
        for g in 2..8u64 {
            for gon in 2..=(g + 3) / 2 {
                let s = curve_support(g, gon, 4 * g, CurveTwist::Canonical).unwrap();
                assert_eq!(s.verdict(1, 1) == Verdict::Nonzero, gon == 2, "g={g} gon={gon}");
            }
        }
    }

    #[test]
    fn low_degree_leaves_unknowns() {
        let s = curve_support(4, 3, 10, CurveTwist::Trivial).unwrap();
        assert_eq!(s.verdict(1, 1), Verdict::Nonzero);
        assert_eq!(s.verdict(3, 1), Verdict::Unknown);
    }

    #[test]
    fn duality() {
        assert_eq!(curve_duality_pair(0, 0, 7, 2), (4, -2));
        // r_d = 9, b = g - 1 = 2: the middle column is self-dual
        assert_eq!(curve_duality_pair(3, 2, 12, 4), (4, 2));
    }
}
