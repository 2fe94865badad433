//! Two-row Boij-Soderberg tables: pure tables, synthesis, decomposition and
//! the random-coefficient profile sampler.
//!
//! A two-row table of length `r` has columns `p = 0..=r` and rows `q = 1, 2`.
//! The pure table `Pi_i` (`0 <= i <= r + 1`) has degree sequence
//! `a_p = p + 1` for `p < i` and `a_p = p + 2` for `p >= i`, so row 1 holds
//! columns `0..i` and row 2 columns `i..=r`. Its entries are
//! `beta_p = c / prod_{j != p} |a_j - a_p|` scaled to `beta_0 = 1`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Exp1, StandardUniform};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;
use statrs::statistics::{Data, OrderStatistics};

use crate::error::{Error, Result};
use crate::koszul::{BettiTable, FieldTag, Method, TableSource};
use crate::par;

/// One pure table `Pi_i` of length `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureTable {
    pub i: usize,
    pub r: usize,
    /// `a_p = p + q_p`.
    pub degrees: Vec<i64>,
    /// `beta_0 .. beta_r`, all positive, `beta_0 = 1`.
    pub betti: Vec<BigRational>,
}

impl PureTable {
    /// Row holding column `p`.
    pub fn row_of(&self, p: usize) -> i64 {
        if p < self.i {
            1
        } else {
            2
        }
    }

    pub fn to_table(&self) -> BettiTable<BigRational> {
        let mut t = BettiTable::new(TableSource::TwoRow { r: self.r }, FieldTag::Exact, Method::Formula);
        for (p, b) in self.betti.iter().enumerate() {
            t.set(p, self.row_of(p), b.clone());
        }
        t
    }
}

fn degrees(i: usize, r: usize) -> Vec<i64> {
    (0..=r).map(|p| p as i64 + if p < i { 1 } else { 2 }).collect()
}

/// `Pi_i` for `0 <= i <= r + 1`. `i = r + 1` is the single-row table with
/// `beta_p = C(r, p)`, `i = 0` its copy in row 2.
pub fn pure_table(i: usize, r: usize) -> Result<PureTable> {
    if r == 0 || i > r + 1 {
        return Err(Error::InvalidParameters(format!("pure table needs r >= 1 and 0 <= i <= r+1, got i={i}, r={r}")));
    }
    let a = degrees(i, r);
    let denom = |p: usize| -> BigInt {
        a.iter()
            .enumerate()
            .filter(|&(j, _)| j != p)
            .map(|(_, &aj)| BigInt::from((aj - a[p]).abs()))
            .product()
    };
    let d0 = denom(0);
    let betti = (0..=r).map(|p| BigRational::new(d0.clone(), denom(p))).collect();
    Ok(PureTable {
        i,
        r,
        degrees: a,
        betti,
    })
}

/// Coefficients of a decomposition, indexed by `i = 0..=r+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BsDecomposition {
    pub r: usize,
    pub coeffs: Vec<BigRational>,
}

impl BsDecomposition {
    /// `x_1 .. x_r`.
    pub fn interior(&self) -> &[BigRational] {
        &self.coeffs[1..=self.r]
    }

    pub fn synthesize(&self) -> Result<BettiTable<BigRational>> {
        synthesize_full(&self.coeffs, self.r)
    }

    /// CSV `i,x`, nonzero coefficients only.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,x\n");
        for (i, x) in self.coeffs.iter().enumerate() {
            if !x.is_zero() {
                s.push_str(&format!("{i},{x}\n"));
            }
        }
        s
    }
}

impl fmt::Display for BsDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| format!("{x} Pi_{i}"))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `sum_i x_i Pi_i` for coefficients `x_1..x_r`.
pub fn synthesize(x: &[BigRational], r: usize) -> Result<BettiTable<BigRational>> {
    if x.len() != r {
        return Err(Error::InvalidParameters(format!("expected {r} coefficients, got {}", x.len())));
    }
    let mut full = vec![BigRational::zero(); r + 2];
    full[1..=r].clone_from_slice(x);
    synthesize_full(&full, r)
}

/// Like [`synthesize`] with coefficients `x_0..x_{r+1}`.
pub fn synthesize_full(x: &[BigRational], r: usize) -> Result<BettiTable<BigRational>> {
    if x.len() != r + 2 {
        return Err(Error::InvalidParameters(format!("expected {} coefficients, got {}", r + 2, x.len())));
    }
    if let Some(i) = x.iter().position(|v| v.is_negative()) {
        return Err(Error::InvalidParameters(format!("coefficient x_{i} = {} is negative", x[i])));
    }
    let mut t = BettiTable::new(TableSource::TwoRow { r }, FieldTag::Exact, Method::Synthesized);
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        let pi = pure_table(i, r)?;
        for (p, b) in pi.betti.iter().enumerate() {
            let q = pi.row_of(p);
            t.set(p, q, t.get(p, q) + xi * b);
        }
    }
    Ok(t)
}

/// Which pure table to peel first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PeelOrder {
    /// The smallest column with a row-2 entry.
    #[default]
    LowCorner,
    /// The largest column with a row-1 entry.
    HighCorner,
}

/// Decomposes a two-row table into pure tables by greedy peeling.
pub fn decompose<V: crate::koszul::BettiValue>(t: &BettiTable<V>) -> Result<BsDecomposition> {
    decompose_with(t, PeelOrder::LowCorner)
}

pub fn decompose_with<V: crate::koszul::BettiValue>(t: &BettiTable<V>, order: PeelOrder) -> Result<BsDecomposition> {
    if let Some(((p, q), _)) = t.entries().find(|((_, q), _)| *q != 1 && *q != 2) {
        return Err(Error::NotInPureCone(format!("entry at (p={p}, q={q}) outside rows 1 and 2")));
    }
    let r = match t.source {
        TableSource::TwoRow { r } => r.max(t.max_p().unwrap_or(0)),
        TableSource::Veronese(_) => t.max_p().unwrap_or(0),
    };
    let mut coeffs = vec![BigRational::zero(); r + 2];
    if t.is_zero() {
        return Ok(BsDecomposition { r, coeffs });
    }
    if r == 0 {
        return Err(Error::NotInPureCone("a single column is not a two-row table of positive length".into()));
    }
    // rem[q-1][p]
    let mut rem = vec![vec![BigRational::zero(); r + 1]; 2];
    for ((p, q), v) in t.entries() {
        rem[q as usize - 1][p] = v.to_rational();
    }
    for _ in 0..r + 2 {
        if rem.iter().flatten().all(Zero::is_zero) {
            return Ok(BsDecomposition { r, coeffs });
        }
        let i = match order {
            PeelOrder::LowCorner => (0..=r).find(|&p| !rem[1][p].is_zero()).unwrap_or(r + 1),
            PeelOrder::HighCorner => (0..=r).rev().find(|&p| !rem[0][p].is_zero()).map_or(0, |p| p + 1),
        };
        let pi = pure_table(i, r)?;
        let t_max = (0..=r)
            .map(|p| &rem[pi.row_of(p) as usize - 1][p] / &pi.betti[p])
            .min()
            .expect("r >= 1");
        if !t_max.is_positive() {
            return Err(Error::NotInPureCone(format!(
                "peeling Pi_{i} stalls with a nonzero remainder"
            )));
        }
        for p in 0..=r {
            let slot = &mut rem[pi.row_of(p) as usize - 1][p];
            *slot -= &t_max * &pi.betti[p];
        }
        coeffs[i] += t_max;
    }
    if rem.iter().flatten().all(Zero::is_zero) {
        Ok(BsDecomposition { r, coeffs })
    } else {
        Err(Error::NotInPureCone("remainder left after peeling every pure table".into()))
    }
}

/// Coefficient distributions for the sampler.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffDistribution {
    Uniform,
    Exponential,
    Beta22,
}

impl CoeffDistribution {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "exponential" | "exp" => Ok(Self::Exponential),
            "beta" | "beta22" | "beta(2,2)" => Ok(Self::Beta22),
            other => Err(Error::Parse(format!("unknown distribution `{other}` (uniform, exponential, beta22)"))),
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Self::Uniform => rng.sample(StandardUniform),
            Self::Exponential => rng.sample(Exp1),
            Self::Beta22 => Beta::new(2.0, 2.0).expect("valid beta parameters").sample(rng),
        }
    }
}

impl fmt::Display for CoeffDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Uniform => "uniform",
            Self::Exponential => "exponential",
            Self::Beta22 => "beta22",
        })
    }
}

/// Coefficients `x_1..x_r` of sample `index`: stream `index` of a ChaCha8
/// generator seeded with `seed`, independent of how samples are scheduled.
pub fn sample_coefficients(r: usize, seed: u64, index: u64, dist: CoeffDistribution) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..r).map(|_| dist.draw(&mut rng)).collect()
}

fn ln_fact(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// `ln prod_{j != p} |a_j - a_p|` for `Pi_i`.
fn ln_denominator(i: usize, r: usize, p: usize) -> f64 {
    if p < i {
        ln_fact(p) + ln_fact(i - 1 - p) + ln_fact(r + 1 - p) - ln_fact(i - p)
    } else {
        ln_fact(p + 1) - ln_fact(p + 1 - i) + ln_fact(p - i) + ln_fact(r - p)
    }
}

/// `ln beta_p(Pi_i)`.
pub fn ln_pure_entry(i: usize, r: usize, p: usize) -> f64 {
    ln_denominator(i, r, 0) - ln_denominator(i, r, p)
}

fn log_sum_exp(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `ln k_{p,1}(x) = ln sum_{i > p} x_i beta_p(Pi_i)` for `x = (x_1..x_r)`.
pub fn ln_kp1(x: &[f64], p: usize) -> f64 {
    let r = x.len();
    log_sum_exp(
        ((p + 1)..=r)
            .filter(|&i| x[i - 1] > 0.0)
            .map(|i| x[i - 1].ln() + ln_pure_entry(i, r, p)),
    )
}

/// `round(r/2 + a sqrt(r)/2)`.
pub fn profile_index(r: usize, a: f64) -> usize {
    let rf = r as f64;
    (rf / 2.0 + a * rf.sqrt() / 2.0).round().max(0.0) as usize
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileRow {
    pub a: f64,
    pub p: usize,
    pub median_rho: f64,
    pub p10: f64,
    pub p90: f64,
    pub gauss_ref: f64,
    pub abs_err_median: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileStats {
    pub r: usize,
    pub samples: usize,
    pub seed: u64,
    pub distribution: CoeffDistribution,
    pub rows: Vec<ProfileRow>,
}

impl ProfileStats {
    pub fn row(&self, a: f64) -> Option<&ProfileRow> {
        self.rows.iter().find(|row| (row.a - a).abs() < 1e-12)
    }

    /// Columns `a,median_rho,p10,p90,gauss_ref,abs_err_median`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("a,median_rho,p10,p90,gauss_ref,abs_err_median\n");
        for row in &self.rows {
            s.push_str(&format!(
                "{},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
                row.a, row.median_rho, row.p10, row.p90, row.gauss_ref, row.abs_err_median
            ));
        }
        s
    }
}

/// Default grid of `a` values.
pub const DEFAULT_GRID: [f64; 9] = [-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0];

/// Samples `n` random coefficient vectors and summarises the self-normalised
/// profile `rho(a) = k_{p(a),1}(x) / k_{p(0),1}(x)` on `grid`.
pub fn sample_profiles(r: usize, n: usize, seed: u64, dist: CoeffDistribution, grid: &[f64]) -> Result<ProfileStats> {
    if r < 4 || n == 0 {
        return Err(Error::InvalidParameters(format!("need r >= 4 and at least one sample, got r={r}, n={n}")));
    }
    let p0 = profile_index(r, 0.0);
    let ps: Vec<usize> = grid.iter().map(|&a| profile_index(r, a)).collect();
    if let Some((a, p)) = grid.iter().zip(&ps).find(|(_, &p)| p >= r) {
        return Err(Error::Domain(format!("a={a} maps to column {p}, outside 0..{r}")));
    }
    // rhos[s][g]
    let rhos: Vec<Vec<f64>> = par::map_range(n, |s| {
        let x = sample_coefficients(r, seed, s as u64, dist);
        let base = ln_kp1(&x, p0);
        ps.iter().map(|&p| (ln_kp1(&x, p) - base).exp()).collect()
    });
    let rows = grid
        .iter()
        .enumerate()
        .map(|(g, &a)| {
            let gauss = (-a * a / 2.0).exp();
            let mut vals = Data::new(rhos.iter().map(|v| v[g]).collect::<Vec<f64>>());
            let mut errs = Data::new(rhos.iter().map(|v| (v[g] - gauss).abs()).collect::<Vec<f64>>());
            ProfileRow {
                a,
                p: ps[g],
                median_rho: vals.median(),
                p10: vals.percentile(10),
                p90: vals.percentile(90),
                gauss_ref: gauss,
                abs_err_median: errs.median(),
            }
        })
        .collect();
    Ok(ProfileStats {
        r,
        samples: n,
        seed,
        distribution: dist,
        rows,
    })
}

/// Exact rational coefficients `k / denom`, handy for tests and the CLI.
pub fn rational(k: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(k), BigInt::from(denom))
}

/// `sum_p (-1)^p beta_p a_p^k` for `k < r`: the defining linear conditions.
pub fn herzog_kuhl_residuals(t: &PureTable) -> Vec<BigRational> {
    (0..t.r as u32)
        .map(|k| {
            let mut s = BigRational::zero();
            for (p, (b, &a)) in t.betti.iter().zip(&t.degrees).enumerate() {
                let mut pw = BigRational::one();
                for _ in 0..k {
                    pw *= BigRational::from_integer(BigInt::from(a));
                }
                let term = b * pw;
                if p % 2 == 0 {
                    s += term;
                } else {
                    s -= term;
                }
            }
            s
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&k| rational(k, 1)).collect()
    }

    #[test]
    fn pure_1_2() {
        let t = pure_table(1, 2).unwrap();
        assert_eq!(t.degrees, vec![1, 3, 4]);
        assert_eq!(t.betti, ints(&[1, 3, 2]));
    }

    #[test]
    fn single_row_is_binomial() {
        for r in 1..12usize {
            let t = pure_table(r + 1, r).unwrap();
            let want: Vec<BigRational> = (0..=r)
                .map(|p| BigRational::from_integer(crate::binom::binom_big(r as i64, p as i64)))
                .collect();
            assert_eq!(t.betti, want);
        }
    }

    #[test]
    fn herzog_kuhl_holds() {
        for r in 1..10 {
            for i in 0..=r + 1 {
                let t = pure_table(i, r).unwrap();
                assert!(herzog_kuhl_residuals(&t).iter().all(Zero::is_zero), "i={i} r={r}");
                assert!(t.betti.iter().all(|b| b.is_positive()));
            }
        }
    }

    #[test]
    fn out_of_range() {
        assert!(pure_table(4, 2).is_err());
        assert!(pure_table(0, 0).is_err());
    }

    #[test]
    fn log_entries_match_exact() {
        for r in [3usize, 7, 12] {
            for i in 1..=r {
                let t = pure_table(i, r).unwrap();
                for p in 0..=r {
                    let exact = crate::koszul::rational_f64(&t.betti[p]).ln();
                    assert!((ln_pure_entry(i, r, p) - exact).abs() < 1e-9, "i={i} r={r} p={p}");
                }
            }
        }
    }

    #[test]
    fn synthesize_unit_vector_is_pure() {
        let r = 5;
        for i in 1..=r {
            let mut x = vec![BigRational::zero(); r];
            x[i - 1] = BigRational::one();
            let t = synthesize(&x, r).unwrap();
            assert_eq!(t.entries().count(), r + 1);
            let pure = pure_table(i, r).unwrap().to_table();
            for ((p, q), v) in pure.entries() {
                assert_eq!(&t.get(p, q), v);
            }
        }
    }

    #[test]
    fn synthesize_zero_and_negative() {
        assert!(synthesize(&vec![BigRational::zero(); 4], 4).unwrap().is_zero());
        let mut x = vec![BigRational::zero(); 4];
        x[2] = rational(-1, 2);
        assert!(synthesize(&x, 4).is_err());
    }

    #[test]
    fn decompose_pure_is_unit() {
        let r = 6;
        for i in 0..=r + 1 {
            let dec = decompose(&pure_table(i, r).unwrap().to_table()).unwrap();
            for (j, x) in dec.coeffs.iter().enumerate() {
                assert_eq!(x, &if i == j { BigRational::one() } else { BigRational::zero() });
            }
        }
    }

    #[test]
    fn decompose_both_orders_agree() {
        let r = 7;
        let x: Vec<BigRational> = (1..=r as i64).map(|k| rational(k % 3, k + 1)).collect();
        let t = synthesize(&x, r).unwrap();
        let a = decompose_with(&t, PeelOrder::LowCorner).unwrap();
        let b = decompose_with(&t, PeelOrder::HighCorner).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.interior(), &x[..]);
    }

    #[test]
    fn decompose_rejects_non_cone() {
        let mut t = BettiTable::new(TableSource::TwoRow { r: 2 }, FieldTag::Exact, Method::Synthesized);
        t.set(0, 1, rational(1, 1));
        t.set(1, 2, rational(1, 1));
        assert!(matches!(decompose(&t), Err(Error::NotInPureCone(_))));
        let mut t3 = BettiTable::new(TableSource::TwoRow { r: 2 }, FieldTag::Exact, Method::Synthesized);
        t3.set(0, 3, rational(1, 1));
        assert!(decompose(&t3).is_err());
    }

    #[test]
    fn rho_at_zero_is_one() {
        let s = sample_profiles(16, 20, 7, CoeffDistribution::Uniform, &[0.0, 1.0]).unwrap();
        let row = s.row(0.0).unwrap();
        assert_eq!(row.median_rho, 1.0);
        assert_eq!(row.p10, 1.0);
        assert_eq!(row.p90, 1.0);
    }

    #[test]
    fn streams_are_stable() {
        let a = sample_coefficients(8, 42, 3, CoeffDistribution::Beta22);
        let b = sample_coefficients(8, 42, 3, CoeffDistribution::Beta22);
        let c = sample_coefficients(8, 42, 4, CoeffDistribution::Beta22);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn sampler_rejects_small_r() {
        assert!(sample_profiles(3, 10, 1, CoeffDistribution::Uniform, &[0.0]).is_err());
    }
}
