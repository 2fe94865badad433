//! Exact sparse linear algebra over `GF(p)` and `Q`.

mod echelon;
mod field;
mod sparse;

pub use field::{Field, FieldChoice, PrimeField, RationalField, DEFAULT_PRIME, DEFAULT_PRIMES};
pub use sparse::SparseMatrix;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use echelon::{Echelon, SparseVec};

/// Limits guarding exact rational elimination.
#[derive(Clone, Copy, Debug)]
pub struct LinalgConfig {
    /// Matrices with more nonzeros are refused over `Q`.
    pub rational_max_nnz: usize,
    /// Largest numerator/denominator bit length tolerated in a pivot row.
    pub rational_max_bits: u64,
}

impl Default for LinalgConfig {
    fn default() -> Self {
        LinalgConfig {
            rational_max_nnz: 2_000_000,
            rational_max_bits: 4096,
        }
    }
}

/// Elimination order: coordinates (rows) with fewer nonzeros lead, and
/// sparser columns are inserted first. Ties break on the lower index.
struct Ordering {
    row_pos: Vec<u32>,
    col_order: Vec<usize>,
}

fn markowitz_order(m: &SparseMatrix) -> Ordering {
    let mut row_count = vec![0u32; m.n_rows()];
    for col in m.columns() {
        for &(r, _) in col {
            row_count[r as usize] += 1;
        }
    }
    let mut rows: Vec<usize> = (0..m.n_rows()).collect();
    rows.sort_by_key(|&r| (row_count[r], r));
    let mut row_pos = vec![0u32; m.n_rows()];
    for (pos, &r) in rows.iter().enumerate() {
        row_pos[r] = pos as u32;
    }
    let mut col_order: Vec<usize> = (0..m.n_cols()).collect();
    col_order.sort_by_key(|&c| (m.columns()[c].len(), c));
    Ordering { row_pos, col_order }
}

fn to_field_vec<F: Field>(field: &F, col: &[(u32, i64)], row_pos: &[u32]) -> SparseVec<F::Elem> {
    let mut v: SparseVec<F::Elem> = col
        .iter()
        .map(|&(r, x)| (row_pos[r as usize], field.from_i64(x)))
        .filter(|(_, x)| !field.is_zero(x))
        .collect();
    v.sort_unstable_by_key(|e| e.0);
    v
}

fn rank_in<F: Field>(m: &SparseMatrix, field: &F) -> Result<usize> {
    let ord = markowitz_order(m);
    let full = m.n_rows().min(m.n_cols());
    let mut ech = Echelon::new(field, m.n_rows(), false);
    for &c in &ord.col_order {
        if ech.rank() == full {
            break;
        }
        let v = to_field_vec(field, &m.columns()[c], &ord.row_pos);
        ech.insert(v, c as u32)?;
    }
    Ok(ech.rank())
}

fn check_rational_size(m: &SparseMatrix, cfg: &LinalgConfig) -> Result<()> {
    if m.nnz() > cfg.rational_max_nnz {
        return Err(Error::Budget {
            what: "rational elimination".into(),
            needed: m.nnz() as u128,
            cap: cfg.rational_max_nnz as u128,
        });
    }
    Ok(())
}

/// Exact rank of `m` over the chosen field, with default limits.
pub fn rank(m: &SparseMatrix, f: FieldChoice) -> Result<usize> {
    rank_with(m, f, &LinalgConfig::default())
}

pub fn rank_with(m: &SparseMatrix, f: FieldChoice, cfg: &LinalgConfig) -> Result<usize> {
    match f {
        FieldChoice::Prime(p) => rank_in(m, &PrimeField::new(p)),
        FieldChoice::Rational => {
            check_rational_size(m, cfg)?;
            rank_in(
                m,
                &RationalField {
                    max_bits: cfg.rational_max_bits,
                },
            )
        }
    }
}

/// A solution `x` of `M x = v`.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Modular { p: u32, x: Vec<u64> },
    Rational(Vec<BigRational>),
}

impl Witness {
    /// Recomputes `M x` and compares it with `v` in the witness' field.
    pub fn verify(&self, m: &SparseMatrix, v: &[i64]) -> bool {
        match self {
            Witness::Modular { p, x } => {
                let f = PrimeField::new(*p);
                let mut acc = vec![0u64; m.n_rows()];
                for (r, c, a) in m.triplets() {
                    acc[r] = f.add(&acc[r], &f.mul(&f.from_i64(a), &x[c]));
                }
                acc.iter().zip(v).all(|(a, &b)| *a == f.from_i64(b))
            }
            Witness::Rational(x) => {
                let mut acc = vec![BigRational::zero(); m.n_rows()];
                for (r, c, a) in m.triplets() {
                    acc[r] += &x[c] * BigRational::from_integer(a.into());
                }
                acc.iter()
                    .zip(v)
                    .all(|(a, &b)| a == &BigRational::from_integer(b.into()))
            }
        }
    }
}

/// Outcome of an image-membership query.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageMembership {
    pub member: bool,
    pub witness: Option<Witness>,
}

fn in_image_in<F: Field>(
    m: &SparseMatrix,
    v: &[i64],
    field: &F,
    wrap: impl Fn(Vec<F::Elem>) -> Witness,
) -> Result<ImageMembership> {
    let ord = markowitz_order(m);
    let mut ech = Echelon::new(field, m.n_rows(), true);
    for &c in &ord.col_order {
        let col = to_field_vec(field, &m.columns()[c], &ord.row_pos);
        ech.insert(col, c as u32)?;
    }
    let dense: Vec<(u32, i64)> = v
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(r, &x)| (r as u32, x))
        .collect();
    let target = to_field_vec(field, &dense, &ord.row_pos);
    let (rem, coeffs) = ech.solve(target)?;
    if !rem.is_empty() {
        return Ok(ImageMembership {
            member: false,
            witness: None,
        });
    }
    let mut x = vec![field.from_i64(0); m.n_cols()];
    for (c, a) in coeffs {
        x[c as usize] = a;
    }
    Ok(ImageMembership {
        member: true,
        witness: Some(wrap(x)),
    })
}

/// Decides whether `M x = v` is solvable, returning a witness when it is.
pub fn in_image(m: &SparseMatrix, v: &[i64], f: FieldChoice) -> Result<ImageMembership> {
    in_image_with(m, v, f, &LinalgConfig::default())
}

pub fn in_image_with(
    m: &SparseMatrix,
    v: &[i64],
    f: FieldChoice,
    cfg: &LinalgConfig,
) -> Result<ImageMembership> {
    if v.len() != m.n_rows() {
        return Err(Error::InvalidParameters(format!(
            "vector of length {} against a matrix with {} rows",
            v.len(),
            m.n_rows()
        )));
    }
    match f {
        FieldChoice::Prime(p) => in_image_in(m, v, &PrimeField::new(p), |x| Witness::Modular { p, x }),
        FieldChoice::Rational => {
            check_rational_size(m, cfg)?;
            in_image_in(
                m,
                v,
                &RationalField {
                    max_bits: cfg.rational_max_bits,
                },
                Witness::Rational,
            )
        }
    }
}

/// Ranks of one matrix at several primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiPrimeRank {
    pub per_prime: Vec<(u32, usize)>,
    /// Maximum over primes; reductions mod p can only lower the rank.
    pub estimate: usize,
}

impl MultiPrimeRank {
    pub fn agree(&self) -> bool {
        self.per_prime.iter().all(|&(_, r)| r == self.estimate)
    }
}

pub fn multi_prime_rank(m: &SparseMatrix, primes: &[u32]) -> Result<MultiPrimeRank> {
    let mut per_prime = Vec::with_capacity(primes.len());
    for &p in primes {
        per_prime.push((p, rank(m, FieldChoice::prime(p)?)?));
    }
    let estimate = per_prime.iter().map(|&(_, r)| r).max().unwrap_or(0);
    Ok(MultiPrimeRank { per_prime, estimate })
}

/// Lossy conversion used only when reporting rational witnesses.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const GF: FieldChoice = FieldChoice::Prime(DEFAULT_PRIME);

    /// Dense fraction elimination over Q, independent of the sparse path.
    fn dense_rank(m: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<BigRational>> = m
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        let rows = a.len();
        let cols = if rows == 0 { 0 } else { a[0].len() };
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for r in 0..rows {
                if r != rank && !a[r][c].is_zero() {
                    let f = &a[r][c] / &a[rank][c];
                    for k in c..cols {
                        let t = &f * &a[rank][k];
                        a[r][k] -= t;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn arb_matrix() -> impl Strategy<Value = SparseMatrix> {
        (1usize..9, 1usize..9).prop_flat_map(|(r, c)| {
            proptest::collection::vec(
                prop_oneof![6 => Just(0i64), 2 => -3i64..=3],
                r * c,
            )
            .prop_map(move |vals| {
                SparseMatrix::from_triplets(
                    r,
                    c,
                    vals.iter()
                        .enumerate()
                        .filter(|(_, &v)| v != 0)
                        .map(|(i, &v)| (i / c, i % c, v)),
                )
                .unwrap()
            })
        })
    }

    #[test]
    fn trivial_ranks() {
        assert_eq!(rank(&SparseMatrix::zeros(4, 5), GF).unwrap(), 0);
        assert_eq!(rank(&SparseMatrix::zeros(0, 0), GF).unwrap(), 0);
        for k in [1, 5, 17] {
            assert_eq!(rank(&SparseMatrix::identity(k), GF).unwrap(), k);
            assert_eq!(rank(&SparseMatrix::identity(k), FieldChoice::Rational).unwrap(), k);
        }
    }

    #[test]
    fn characteristic_matters() {
        // det = 3: full rank over Q, singular mod 3
        let m = SparseMatrix::from_triplets(2, 2, [(0, 0, 2), (0, 1, 1), (1, 0, 1), (1, 1, 2)]).unwrap();
        assert_eq!(rank(&m, FieldChoice::Rational).unwrap(), 2);
        assert_eq!(rank(&m, FieldChoice::Prime(3)).unwrap(), 1);
        let mp = multi_prime_rank(&m, &[3, 5, 7]).unwrap();
        assert_eq!(mp.estimate, 2);
        assert!(!mp.agree());
    }

    #[test]
    fn image_membership() {
        let m = SparseMatrix::from_triplets(3, 2, [(0, 0, 1), (1, 0, 1), (1, 1, 1), (2, 1, 1)]).unwrap();
        let zero = in_image(&m, &[0, 0, 0], FieldChoice::Rational).unwrap();
        assert!(zero.member);
        assert!(zero.witness.unwrap().verify(&m, &[0, 0, 0]));
        let yes = in_image(&m, &[1, 3, 2], FieldChoice::Rational).unwrap();
        assert!(yes.member);
        assert!(yes.witness.unwrap().verify(&m, &[1, 3, 2]));
        let no = in_image(&m, &[1, 0, 0], FieldChoice::Rational).unwrap();
        assert!(!no.member && no.witness.is_none());
        let id = SparseMatrix::identity(4);
        let r = in_image(&id, &[3, -1, 0, 2], GF).unwrap();
        assert!(r.member && r.witness.unwrap().verify(&id, &[3, -1, 0, 2]));
        assert!(in_image(&m, &[1, 2], GF).is_err());
    }

    #[test]
    fn rational_budget() {
        let cfg = LinalgConfig {
            rational_max_nnz: 3,
            ..Default::default()
        };
        assert!(matches!(
            rank_with(&SparseMatrix::identity(4), FieldChoice::Rational, &cfg),
            Err(Error::Budget { .. })
        ));
        // Entries with large denominators trip the bit budget.
        let cfg = LinalgConfig {
            rational_max_bits: 2,
            ..Default::default()
        };
        let m = SparseMatrix::from_triplets(2, 2, [(0, 0, 7), (1, 0, 1), (1, 1, 1)]).unwrap();
        assert!(matches!(
            rank_with(&m, FieldChoice::Rational, &cfg),
            Err(Error::ResourceLimit { .. })
        ));
        assert_eq!(rank_with(&m, GF, &cfg).unwrap(), 2);
    }

    proptest! {
        #[test]
        fn rank_matches_dense_oracle(m in arb_matrix()) {
            prop_assert_eq!(rank(&m, FieldChoice::Rational).unwrap(), dense_rank(&m.to_dense()));
        }

        #[test]
        fn modular_rank_never_exceeds_rational(m in arb_matrix(), p in prop::sample::select(vec![3u32, 5, 7, 32003])) {
            prop_assert!(rank(&m, FieldChoice::Prime(p)).unwrap() <= rank(&m, FieldChoice::Rational).unwrap());
        }

        #[test]
        fn rank_of_transpose(m in arb_matrix()) {
            prop_assert_eq!(rank(&m, GF).unwrap(), rank(&m.transpose(), GF).unwrap());
            prop_assert_eq!(rank(&m, FieldChoice::Rational).unwrap(), rank(&m.transpose(), FieldChoice::Rational).unwrap());
        }

        #[test]
        fn rank_is_permutation_invariant(m in arb_matrix(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut rp: Vec<usize> = (0..m.n_rows()).collect();
            let mut cp: Vec<usize> = (0..m.n_cols()).collect();
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            let pm = m.permute(&rp, &cp);
            prop_assert_eq!(rank(&m, GF).unwrap(), rank(&pm, GF).unwrap());
        }

        #[test]
        fn image_agrees_with_augmented_rank(m in arb_matrix(), seed in proptest::collection::vec(-2i64..=2, 8)) {
            let v: Vec<i64> = seed.iter().cycle().take(m.n_rows()).cloned().collect();
            let res = in_image(&m, &v, FieldChoice::Rational).unwrap();
            let aug = rank(&m.with_column(&v), FieldChoice::Rational).unwrap();
            prop_assert_eq!(res.member, aug == rank(&m, FieldChoice::Rational).unwrap());
            if let Some(w) = res.witness {
                prop_assert!(w.verify(&m, &v));
            }
        }
    }
}
