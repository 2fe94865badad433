//! Koszul strands of the Artinian-reduced Veronese complex.
//!
//! `K_{p,q}(n, b; d)` is the middle cohomology of
//!
//! ```text
//! L^{p+1} S_d (x) S_{(q-1)d+b}  ->  L^p S_d (x) S_{qd+b}  ->  L^{p-1} S_d (x) S_{(q+1)d+b}
//! ```
//!
//! with `S = S-bar` the reduced ring and
//! `(s_1 ^ .. ^ s_p) (x) t  |->  sum_i (-1)^i (s_1 ^ .. s_i-hat .. ^ s_p) (x) s_i t`.
//!
//! Basis elements of `L^k S_d (x) S_e` are pairs (colex-ranked `k`-subset of
//! the degree-`d` basis, index into the degree-`e` basis); the global index is
//! `wedge_rank * dim S_e + monomial_index`. Every basis element has a
//! multidegree in `Z^{n+1}` (sum of all exponent vectors) which the
//! differential preserves, so ranks are computed block by block.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, FieldChoice, LinalgConfig, MultiPrimeRank, SparseMatrix};
use crate::par;
use crate::ring::{reduced_basis, Monomial, RingContext};

use super::wedge::{next_colex, ColexTable};

/// Size limits for the engine.
#[derive(Clone, Copy, Debug)]
pub struct EngineConfig {
    /// Cap on the estimated nonzeros of one differential: `source_dim * (p + 1)`.
    pub max_entries: u128,
    pub linalg: LinalgConfig,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_entries: 50_000_000,
            linalg: LinalgConfig::default(),
        }
    }
}

type Multidegree = Vec<u32>;

/// Graded bases of one ring context, shared by all its differentials.
pub struct Engine {
    ctx: RingContext,
    cfg: EngineConfig,
    alphabet: Vec<Monomial>,
    colex: ColexTable,
}

/// One source basis element: (colex rank of the wedge, monomial index).
type Elem = (u64, u32);

/// The map `L^p S_d (x) S_e -> L^{p-1} S_d (x) S_{e+d}`.
pub struct Differential<'a> {
    engine: &'a Engine,
    p: usize,
    e: i64,
    src_basis: Vec<Monomial>,
    tgt_len: u64,
    /// `prod[i * src_len + j]`: index of `alphabet[i] * src_basis[j]`, or `u32::MAX` for zero.
    prod: Vec<u32>,
}

impl Engine {
    pub fn new(ctx: RingContext, cfg: EngineConfig) -> Self {
        let alphabet = reduced_basis(&ctx, ctx.d as i64);
        let colex = ColexTable::new(alphabet.len());
        Engine {
            ctx,
            cfg,
            alphabet,
            colex,
        }
    }

    pub fn ctx(&self) -> &RingContext {
        &self.ctx
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    /// The degree-`d` basis whose exterior powers appear in the complex.
    pub fn alphabet(&self) -> &[Monomial] {
        &self.alphabet
    }

    /// `dim S-bar_d`, the largest homological index with a nonzero term.
    pub fn wedge_rank_max(&self) -> usize {
        self.alphabet.len()
    }

    /// `dim L^k S_d (x) S_e`; `None` when it does not fit in `u64`.
    pub fn term_dim(&self, k: i64, e: i64) -> Option<u64> {
        if k < 0 || k as usize > self.alphabet.len() {
            return Some(0);
        }
        let mons = crate::ring::reduced_dim(&self.ctx, e);
        if mons == 0 {
            return Some(0);
        }
        self.colex.count(k as usize)?.checked_mul(mons)
    }

    /// Degree of the monomial factor in the middle term of `K_{p,q}`.
    pub fn middle_degree(&self, q: i64) -> i64 {
        q * self.ctx.d as i64 + self.ctx.b
    }

    /// The differential leaving `L^p S_d (x) S_e`.
    pub fn differential(&self, p: usize, e: i64) -> Result<Differential<'_>> {
        let src_dim = self.term_dim(p as i64, e);
        let needed = src_dim.map_or(u128::MAX, |s| s as u128 * (p as u128 + 1));
        if needed > self.cfg.max_entries {
            return Err(Error::Budget {
                what: format!("differential out of L^{p} S_d (x) S_{e} for {}", self.ctx),
                needed,
                cap: self.cfg.max_entries,
            });
        }
        Ok(self.differential_unchecked(p, e))
    }

    /// Same as [`Engine::differential`] without the size budget; only the
    /// product table is built, so callers that touch a single block may skip it.
    fn differential_unchecked(&self, p: usize, e: i64) -> Differential<'_> {
        let src_basis = reduced_basis(&self.ctx, e);
        let tgt_basis = reduced_basis(&self.ctx, e + self.ctx.d as i64);
        let index: HashMap<&Monomial, u32> =
            tgt_basis.iter().enumerate().map(|(i, m)| (m, i as u32)).collect();
        let mut prod = Vec::with_capacity(self.alphabet.len() * src_basis.len());
        for a in &self.alphabet {
            for t in &src_basis {
                let idx = crate::ring::mul_reduced(a, t, &self.ctx)
                    .map_or(u32::MAX, |m| index[&m]);
                prod.push(idx);
            }
        }
        Differential {
            engine: self,
            p,
            e,
            src_basis,
            tgt_len: tgt_basis.len() as u64,
            prod,
        }
    }
}

impl<'a> Differential<'a> {
    pub fn source_dim(&self) -> u64 {
        self.engine.term_dim(self.p as i64, self.e).unwrap_or(u64::MAX)
    }

    pub fn target_dim(&self) -> u64 {
        self.engine
            .term_dim(self.p as i64 - 1, self.e + self.engine.ctx.d as i64)
            .unwrap_or(u64::MAX)
    }

    fn is_trivial(&self) -> bool {
        self.p == 0 || self.source_dim() == 0 || self.target_dim() == 0
    }

    /// Appends `(target index, sign)` for the image of one basis element.
    fn image(&self, wedge: &[u32], mon: u32, out: &mut Vec<(u64, i64)>) {
        let src_len = self.src_basis.len();
        for (i, &w) in wedge.iter().enumerate() {
            let t = self.prod[w as usize * src_len + mon as usize];
            if t == u32::MAX {
                continue;
            }
            let rank = self.engine.colex.rank_without(wedge, i);
            // positions counted from 1: sign (-1)^(i+1)
            let sign = if i % 2 == 0 { -1 } else { 1 };
            out.push((rank * self.tgt_len + t as u64, sign));
        }
    }

    /// Source elements with nonzero image, grouped by multidegree, blocks sorted by key.
    fn blocks(&self) -> Vec<(Multidegree, Vec<Elem>)> {
        if self.is_trivial() {
            return Vec::new();
        }
        let nv = self.engine.ctx.nvars();
        let m = self.engine.alphabet.len();
        let mut map: HashMap<Multidegree, Vec<Elem>> = HashMap::new();
        let mut wedge: Vec<u32> = (0..self.p as u32).collect();
        let mut rank = 0u64;
        let mut wdeg = vec![0u32; nv];
        let src_len = self.src_basis.len();
        loop {
            wdeg.iter_mut().for_each(|x| *x = 0);
            for &w in &wedge {
                for (acc, &x) in wdeg.iter_mut().zip(self.engine.alphabet[w as usize].exponents()) {
                    *acc += x as u32;
                }
            }
            for (j, t) in self.src_basis.iter().enumerate() {
                let alive = wedge
                    .iter()
                    .any(|&w| self.prod[w as usize * src_len + j] != u32::MAX);
                if !alive {
                    continue;
                }
                let key: Multidegree = wdeg
                    .iter()
                    .zip(t.exponents())
                    .map(|(&a, &b)| a + b as u32)
                    .collect();
                map.entry(key).or_default().push((rank, j as u32));
            }
            rank += 1;
            if !next_colex(&mut wedge, m) {
                break;
            }
        }
        let mut blocks: Vec<_> = map.into_iter().collect();
        blocks.sort_by(|a, b| a.0.cmp(&b.0));
        blocks
    }

    /// Matrix of one block with rows relabelled to the sorted set of targets hit,
    /// plus any `extra_rows` (global target indices) forced into the row set.
    fn block_matrix(&self, elems: &[Elem], extra_rows: &[u64]) -> (SparseMatrix, Vec<u64>) {
        let mut wedge = Vec::with_capacity(self.p);
        let mut images: Vec<Vec<(u64, i64)>> = Vec::with_capacity(elems.len());
        let mut rows: Vec<u64> = extra_rows.to_vec();
        for &(r, j) in elems {
            self.engine.colex.unrank(r, self.p, &mut wedge);
            let mut img = Vec::with_capacity(self.p);
            self.image(&wedge, j, &mut img);
            rows.extend(img.iter().map(|e| e.0));
            images.push(img);
        }
        rows.sort_unstable();
        rows.dedup();
        let cols = images
            .into_iter()
            .map(|img| {
                let mut col: Vec<(u32, i64)> = img
                    .into_iter()
                    .map(|(g, s)| (rows.binary_search(&g).unwrap() as u32, s))
                    .collect();
                col.sort_unstable_by_key(|e| e.0);
                col
            })
            .collect();
        (SparseMatrix::from_columns(rows.len(), cols), rows)
    }

    /// Rank over `field`, summed over multidegree blocks.
    pub fn rank(&self, field: FieldChoice) -> Result<u64> {
        let blocks = self.blocks();
        let cfg = self.engine.cfg.linalg;
        let ranks = par::map_slice(&blocks, |(_, elems)| {
            let (m, _) = self.block_matrix(elems, &[]);
            linalg::rank_with(&m, field, &cfg)
        });
        let mut total = 0u64;
        for r in ranks {
            total += r? as u64;
        }
        Ok(total)
    }

    /// Ranks at several primes. The estimate sums the per-block maxima, which
    /// is still a lower bound for the rank over `Q`.
    pub fn rank_multi(&self, primes: &[u32]) -> Result<MultiPrimeRank> {
        let blocks = self.blocks();
        let per_block = par::map_slice(&blocks, |(_, elems)| {
            let (m, _) = self.block_matrix(elems, &[]);
            linalg::multi_prime_rank(&m, primes)
        });
        let mut per_prime: Vec<(u32, usize)> = primes.iter().map(|&p| (p, 0)).collect();
        let mut estimate = 0;
        for b in per_block {
            let b = b?;
            for (slot, (_, r)) in per_prime.iter_mut().zip(&b.per_prime) {
                slot.1 += r;
            }
            estimate += b.estimate;
        }
        Ok(MultiPrimeRank {
            per_prime,
            estimate,
        })
    }

    /// The full matrix (target x source) in global basis order.
    pub fn matrix(&self) -> Result<SparseMatrix> {
        let (src, tgt) = (self.source_dim(), self.target_dim());
        if src > u32::MAX as u64 || tgt > u32::MAX as u64 {
            return Err(Error::Budget {
                what: "materialized differential".into(),
                needed: src.max(tgt) as u128,
                cap: u32::MAX as u128,
            });
        }
        if self.is_trivial() {
            return Ok(SparseMatrix::zeros(tgt as usize, src as usize));
        }
        let m = self.engine.alphabet.len();
        let mut cols = Vec::with_capacity(src as usize);
        let mut wedge: Vec<u32> = (0..self.p as u32).collect();
        let mut img = Vec::new();
        loop {
            for j in 0..self.src_basis.len() {
                img.clear();
                self.image(&wedge, j as u32, &mut img);
                let mut col: Vec<(u32, i64)> = img.iter().map(|&(g, s)| (g as u32, s)).collect();
                col.sort_unstable_by_key(|e| e.0);
                cols.push(col);
            }
            if !next_colex(&mut wedge, m) {
                break;
            }
        }
        Ok(SparseMatrix::from_columns(tgt as usize, cols))
    }
}

/// The three-term strand computing one `K_{p,q}`.
#[derive(Clone, Debug)]
pub struct KoszulStrand {
    pub ctx: RingContext,
    pub p: usize,
    pub q: i64,
    pub left_dim: u64,
    pub middle_dim: u64,
    pub right_dim: u64,
    /// left -> middle
    pub d_in: SparseMatrix,
    /// middle -> right
    pub d_out: SparseMatrix,
}

impl KoszulStrand {
    /// `d_out * d_in == 0` exactly over the integers.
    pub fn is_complex(&self) -> Result<bool> {
        Ok(self.d_out.mul(&self.d_in)?.is_zero())
    }

    pub fn cohomology_dim(&self, field: FieldChoice) -> Result<u64> {
        let r_out = linalg::rank(&self.d_out, field)? as u64;
        let r_in = linalg::rank(&self.d_in, field)? as u64;
        Ok(self.middle_dim - r_out - r_in)
    }
}

/// Materializes the strand of `K_{p,q}` with both differentials.
pub fn build_strand(ctx: RingContext, p: usize, q: i64, _field: FieldChoice) -> Result<KoszulStrand> {
    build_strand_with(ctx, p, q, &EngineConfig::default())
}

pub fn build_strand_with(ctx: RingContext, p: usize, q: i64, cfg: &EngineConfig) -> Result<KoszulStrand> {
    let engine = Engine::new(ctx, *cfg);
    let e = engine.middle_degree(q);
    let d = ctx.d as i64;
    let dim = |k: i64, e: i64| {
        engine.term_dim(k, e).ok_or_else(|| Error::Budget {
            what: format!("L^{k} S_d (x) S_{e}"),
            needed: u128::MAX,
            cap: cfg.max_entries,
        })
    };
    let d_out = engine.differential(p, e)?.matrix()?;
    let d_in = engine.differential(p + 1, e - d)?.matrix()?;
    Ok(KoszulStrand {
        ctx,
        p,
        q,
        left_dim: dim(p as i64 + 1, e - d)?,
        middle_dim: dim(p as i64, e)?,
        right_dim: dim(p as i64 - 1, e + d)?,
        d_in,
        d_out,
    })
}

/// One computed cell with the ranks that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellResult {
    pub p: usize,
    pub q: i64,
    pub value: u64,
    pub middle_dim: u64,
    pub rank_out: u64,
    pub rank_in: u64,
}

impl Engine {
    /// Rank of the differential leaving `L^p S_d (x) S_e` (zero for trivial maps).
    pub fn differential_rank(&self, p: i64, e: i64, field: FieldChoice) -> Result<u64> {
        if p <= 0 || self.term_dim(p, e) == Some(0) || self.term_dim(p - 1, e + self.ctx.d as i64) == Some(0) {
            return Ok(0);
        }
        self.differential(p as usize, e)?.rank(field)
    }

    pub fn kpq(&self, p: usize, q: i64, field: FieldChoice) -> Result<CellResult> {
        let e = self.middle_degree(q);
        let middle = self.term_dim(p as i64, e).ok_or_else(|| Error::Budget {
            what: format!("middle term of K_{{{p},{q}}}"),
            needed: u128::MAX,
            cap: self.cfg.max_entries,
        })?;
        if middle == 0 {
            return Ok(CellResult {
                p,
                q,
                value: 0,
                middle_dim: 0,
                rank_out: 0,
                rank_in: 0,
            });
        }
        let rank_out = self.differential_rank(p as i64, e, field)?;
        let rank_in = self.differential_rank(p as i64 + 1, e - self.ctx.d as i64, field)?;
        Ok(CellResult {
            p,
            q,
            value: middle - rank_out - rank_in,
            middle_dim: middle,
            rank_out,
            rank_in,
        })
    }
}

/// `dim K_{p,q}(n, b; d)` over `field`.
pub fn kpq_dim(ctx: RingContext, p: usize, q: i64, field: FieldChoice) -> Result<u64> {
    Ok(Engine::new(ctx, EngineConfig::default()).kpq(p, q, field)?.value)
}

/// A cell computed at several primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiPrimeCell {
    pub p: usize,
    pub q: i64,
    /// `(prime, k_{p,q} mod that prime)`.
    pub per_prime: Vec<(u32, u64)>,
    /// Smallest candidate, from the largest ranks seen.
    pub estimate: u64,
}

impl MultiPrimeCell {
    pub fn agree(&self) -> bool {
        self.per_prime.iter().all(|&(_, v)| v == self.estimate)
    }
}

impl Engine {
    pub fn kpq_multi(&self, p: usize, q: i64, primes: &[u32]) -> Result<MultiPrimeCell> {
        let e = self.middle_degree(q);
        let middle = self.term_dim(p as i64, e).unwrap_or(u64::MAX);
        let d = self.ctx.d as i64;
        let zero = MultiPrimeRank {
            per_prime: primes.iter().map(|&p| (p, 0)).collect(),
            estimate: 0,
        };
        let rank = |k: i64, e: i64| -> Result<MultiPrimeRank> {
            if k <= 0 || middle == 0 || self.term_dim(k, e) == Some(0) || self.term_dim(k - 1, e + d) == Some(0) {
                return Ok(zero.clone());
            }
            self.differential(k as usize, e)?.rank_multi(primes)
        };
        let out = rank(p as i64, e)?;
        let inn = rank(p as i64 + 1, e - d)?;
        let per_prime = primes
            .iter()
            .enumerate()
            .map(|(i, &pr)| {
                (
                    pr,
                    middle - out.per_prime[i].1 as u64 - inn.per_prime[i].1 as u64,
                )
            })
            .collect();
        Ok(MultiPrimeCell {
            p,
            q,
            per_prime,
            estimate: middle - out.estimate as u64 - inn.estimate as u64,
        })
    }
}

/// Block of `d_in` around one middle basis element, for image-membership checks.
pub struct LocalBoundary {
    /// Columns: left basis elements of the element's multidegree.
    pub matrix: SparseMatrix,
    /// Row of the chosen middle element.
    pub row: usize,
}

impl Engine {
    /// Global index of `wedge (x) mon` in `L^k S_d (x) S_e`.
    pub fn element_index(&self, wedge: &[u32], mon: &Monomial, e: i64) -> Result<u64> {
        let basis = reduced_basis(&self.ctx, e);
        let j = basis
            .binary_search(mon)
            .map_err(|_| Error::InvalidParameters(format!("{mon} is not a reduced monomial of degree {e}")))?;
        Ok(self.colex.rank(wedge) * basis.len() as u64 + j as u64)
    }

    /// Restriction of `d_in` for `K_{p,q}` to the multidegree of `wedge (x) mon`.
    ///
    /// Sources are enumerated by a depth-first search that only follows
    /// partial wedges whose multidegree stays below the target, so the cost
    /// scales with the block and not with the whole left term.
    pub fn local_boundary(&self, q: i64, wedge: &[u32], mon: &Monomial, max_cols: usize) -> Result<LocalBoundary> {
        let p = wedge.len();
        let d = self.ctx.d as i64;
        let e = self.middle_degree(q);
        let row_global = self.element_index(wedge, mon, e)?;
        let mut target: Vec<i64> = mon.exponents().iter().map(|&x| x as i64).collect();
        for &w in wedge {
            for (t, &x) in target.iter_mut().zip(self.alphabet[w as usize].exponents()) {
                *t += x as i64;
            }
        }
        let diff = self.differential_unchecked(p + 1, e - d);
        let mut elems: Vec<Elem> = Vec::new();
        let mut cur: Vec<u32> = Vec::with_capacity(p + 1);
        for (j, g) in diff.src_basis.iter().enumerate() {
            let rest: Vec<i64> = target
                .iter()
                .zip(g.exponents())
                .map(|(&t, &x)| t - x as i64)
                .collect();
            if rest.iter().any(|&x| x < 0) {
                continue;
            }
            self.collect_subsets(0, p + 1, &rest, &mut cur, &mut |s| {
                elems.push((self.colex.rank(s), j as u32));
            });
            if elems.len() > max_cols {
                return Err(Error::Budget {
                    what: "local boundary block".into(),
                    needed: elems.len() as u128,
                    cap: max_cols as u128,
                });
            }
        }
        elems.sort_unstable();
        let (matrix, rows) = diff.block_matrix(&elems, &[row_global]);
        let row = rows.binary_search(&row_global).unwrap();
        Ok(LocalBoundary { matrix, row })
    }

    fn collect_subsets(
        &self,
        start: usize,
        k: usize,
        rest: &[i64],
        cur: &mut Vec<u32>,
        emit: &mut dyn FnMut(&[u32]),
    ) {
        if k == 0 {
            if rest.iter().all(|&x| x == 0) {
                emit(cur);
            }
            return;
        }
        for i in start..self.alphabet.len() {
            if self.alphabet.len() - i < k {
                break;
            }
            let exps = self.alphabet[i].exponents();
            if exps.iter().zip(rest).any(|(&x, &r)| x as i64 > r) {
                continue;
            }
            let next: Vec<i64> = rest.iter().zip(exps).map(|(&r, &x)| r - x as i64).collect();
            cur.push(i as u32);
            self.collect_subsets(i + 1, k - 1, &next, cur, emit);
            cur.pop();
        }
    }
}
