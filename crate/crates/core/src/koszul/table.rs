use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::FieldChoice;
use crate::par;
use crate::ring::RingContext;

use super::strand::{CellResult, Engine, EngineConfig, MultiPrimeCell};

/// Which field the numbers were computed over.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldTag {
    Field(FieldChoice),
    MultiPrime(Vec<u32>),
    /// Closed forms and synthesized tables: no field involved.
    Exact,
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Field(c) => write!(f, "{c}"),
            FieldTag::MultiPrime(ps) => {
                let list: Vec<String> = ps.iter().map(u32::to_string).collect();
                write!(f, "GF({})", list.join("|"))
            }
            FieldTag::Exact => f.write_str("exact"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Engine,
    Formula,
    Synthesized,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Engine => "engine",
            Method::Formula => "formula",
            Method::Synthesized => "synthesized",
        })
    }
}

impl Method {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "engine" => Ok(Method::Engine),
            "formula" => Ok(Method::Formula),
            "synthesized" => Ok(Method::Synthesized),
            other => Err(Error::Parse(format!("unknown method `{other}`"))),
        }
    }
}

/// What a table describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableSource {
    Veronese(RingContext),
    /// A two-row table of length `r` (columns `0..=r`), not tied to a variety.
    TwoRow { r: usize },
}

/// Entry types a Betti table can hold.
pub trait BettiValue: Clone + PartialEq + Zero + fmt::Display + fmt::Debug {
    fn to_rational(&self) -> BigRational;
    fn to_json(&self) -> serde_json::Value;
}

impl BettiValue for u64 {
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(*self))
    }
    fn to_json(&self) -> serde_json::Value {
        json!(self)
    }
}

impl BettiValue for BigRational {
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
    fn to_json(&self) -> serde_json::Value {
        json!(self.to_string())
    }
}

/// Graded Betti numbers `(p, q) -> k_{p,q}`; absent entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct BettiTable<V = u64> {
    pub source: TableSource,
    pub field: FieldTag,
    pub method: Method,
    entries: BTreeMap<(usize, i64), V>,
}

impl<V: BettiValue> BettiTable<V> {
    pub fn new(source: TableSource, field: FieldTag, method: Method) -> Self {
        BettiTable {
            source,
            field,
            method,
            entries: BTreeMap::new(),
        }
    }

    pub fn get(&self, p: usize, q: i64) -> V {
        self.entries.get(&(p, q)).cloned().unwrap_or_else(V::zero)
    }

    /// Stores `v`, dropping the entry when it is zero.
    pub fn set(&mut self, p: usize, q: i64, v: V) {
        if v.is_zero() {
            self.entries.remove(&(p, q));
        } else {
            self.entries.insert((p, q), v);
        }
    }

    /// Nonzero entries in `(p, q)` order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, i64), &V)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_p(&self) -> Option<usize> {
        self.entries.keys().map(|k| k.0).max()
    }

    pub fn q_range(&self) -> Option<(i64, i64)> {
        let qs = self.entries.keys().map(|k| k.1);
        let lo = qs.clone().min()?;
        Some((lo, qs.max()?))
    }

    pub fn ctx(&self) -> Option<RingContext> {
        match self.source {
            TableSource::Veronese(c) => Some(c),
            TableSource::TwoRow { .. } => None,
        }
    }

    /// Entries with `q` in `rows`, everything else dropped.
    pub fn restrict_rows(&self, rows: &[i64]) -> Self {
        BettiTable {
            source: self.source,
            field: self.field.clone(),
            method: self.method,
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| rows.contains(&k.1))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    pub fn to_rational(&self) -> BettiTable<BigRational> {
        BettiTable {
            source: self.source,
            field: self.field.clone(),
            method: self.method,
            entries: self.entries.iter().map(|(k, v)| (*k, v.to_rational())).collect(),
        }
    }

    /// Diagram with rows indexed by `q`, columns by `p`, a dash for zero.
    pub fn render_diagram(&self) -> String {
        self.render_diagram_with(|p, q| {
            let v = self.get(p, q);
            if v.is_zero() {
                "-".to_string()
            } else {
                v.to_string()
            }
        })
    }

    /// Diagram layout with caller-supplied cell text.
    pub fn render_diagram_with(&self, cell: impl Fn(usize, i64) -> String) -> String {
        let pmax = self.max_p().unwrap_or(0);
        let (qlo, qhi) = self.q_range().unwrap_or((0, 0));
        render_grid(pmax, qlo, qhi, cell)
    }

    /// Diagram over an explicit span, e.g. to show cells that were never computed.
    pub fn render_span(&self, pmax: usize, qlo: i64, qhi: i64, cell: impl Fn(usize, i64) -> String) -> String {
        render_grid(pmax, qlo, qhi, cell)
    }

    /// CSV with header `p,q,value,field,method`, one line per nonzero entry.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("p,q,value,field,method\n");
        for ((p, q), v) in &self.entries {
            s.push_str(&format!("{p},{q},{v},{},{}\n", self.field, self.method));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let source = match self.source {
            TableSource::Veronese(c) => json!({"kind": "veronese", "n": c.n, "b": c.b, "d": c.d}),
            TableSource::TwoRow { r } => json!({"kind": "two_row", "r": r}),
        };
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|((p, q), v)| json!({"p": p, "q": q, "value": v.to_json()}))
            .collect();
        json!({
            "source": source,
            "field": self.field.to_string(),
            "method": self.method.to_string(),
            "entries": entries,
        })
    }
}

pub(crate) fn render_grid(pmax: usize, qlo: i64, qhi: i64, cell: impl Fn(usize, i64) -> String) -> String {
    let mut grid: Vec<Vec<String>> = Vec::new();
    for q in qlo..=qhi {
        grid.push((0..=pmax).map(|p| cell(p, q)).collect());
    }
    let width = grid
        .iter()
        .flatten()
        .map(String::len)
        .chain((0..=pmax).map(|p| p.to_string().len()))
        .max()
        .unwrap_or(1);
    let label_w = (qlo..=qhi).map(|q| q.to_string().len()).max().unwrap_or(1);
    let mut out = format!("{:>lw$} |", "", lw = label_w);
    for p in 0..=pmax {
        out.push_str(&format!(" {:>w$}", p, w = width));
    }
    out.push('\n');
    out.push_str(&"-".repeat(label_w + 2 + (pmax + 1) * (width + 1)));
    out.push('\n');
    for (row, q) in grid.iter().zip(qlo..=qhi) {
        out.push_str(&format!("{:>lw$} |", q, lw = label_w));
        for c in row {
            out.push_str(&format!(" {:>w$}", c, w = width));
        }
        out.push('\n');
    }
    out
}

impl<V: BettiValue> fmt::Display for BettiTable<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_diagram())
    }
}

/// Reads the CSV written by [`BettiTable::to_csv`] (field and method columns optional).
pub fn table_from_csv(text: &str) -> Result<BettiTable<BigRational>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty table CSV".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() < 3 || cols[0] != "p" || cols[1] != "q" || cols[2] != "value" {
        return Err(Error::Parse(format!("unexpected CSV header `{header}`")));
    }
    let mut method = Method::Synthesized;
    let mut rows = Vec::new();
    for line in lines {
        let t: Vec<&str> = line.split(',').map(str::trim).collect();
        if t.len() < 3 {
            return Err(Error::Parse(format!("short CSV line `{line}`")));
        }
        let p: usize = t[0].parse().map_err(|_| Error::Parse(format!("bad p in `{line}`")))?;
        let q: i64 = t[1].parse().map_err(|_| Error::Parse(format!("bad q in `{line}`")))?;
        let v: BigRational = t[2]
            .parse()
            .map_err(|_| Error::Parse(format!("bad value in `{line}`")))?;
        if v < BigRational::zero() {
            return Err(Error::Parse(format!("negative Betti number in `{line}`")));
        }
        if let Some(m) = t.get(4) {
            method = Method::parse(m)?;
        }
        rows.push((p, q, v));
    }
    let r = rows.iter().map(|r| r.0).max().unwrap_or(0);
    let mut table = BettiTable::new(TableSource::TwoRow { r }, FieldTag::Exact, method);
    for (p, q, v) in rows {
        table.set(p, q, v);
    }
    Ok(table)
}

/// All cells `(p, q)` whose middle term can be nonzero: `0 <= p <= dim S_d`
/// and `0 <= qd + b <= (n+1)(d-1)`.
pub fn table_cells(ctx: &RingContext) -> Vec<(usize, i64)> {
    let (qlo, qhi) = q_bounds(ctx);
    let m = crate::ring::reduced_dim(ctx, ctx.d as i64) as usize;
    let mut cells = Vec::new();
    for q in qlo..=qhi {
        for p in 0..=m {
            cells.push((p, q));
        }
    }
    cells
}

/// Weights `q` with a nonempty middle term.
pub fn q_bounds(ctx: &RingContext) -> (i64, i64) {
    let d = ctx.d as i64;
    let lo = (-ctx.b).div_euclid(d) + if (-ctx.b).rem_euclid(d) == 0 { 0 } else { 1 };
    let hi = (ctx.top_degree() - ctx.b).div_euclid(d);
    (lo, hi)
}

/// Computes `cells`, sharing each differential's rank between the two cells
/// that use it. Ranks of distinct differentials run in parallel.
pub fn compute_cells(
    engine: &Engine,
    field: FieldChoice,
    cells: &[(usize, i64)],
) -> Vec<((usize, i64), Result<CellResult>)> {
    let d = engine.ctx().d as i64;
    let mut keys: BTreeSet<(i64, i64)> = BTreeSet::new();
    let mut middles = Vec::with_capacity(cells.len());
    for &(p, q) in cells {
        let e = engine.middle_degree(q);
        let mid = engine.term_dim(p as i64, e);
        if mid != Some(0) {
            keys.insert((p as i64, e));
            keys.insert((p as i64 + 1, e - d));
        }
        middles.push(mid);
    }
    let keys: Vec<(i64, i64)> = keys.into_iter().collect();
    let ranks = par::map_slice(&keys, |&(k, e)| engine.differential_rank(k, e, field));
    let ranks: HashMap<(i64, i64), Result<u64>> = keys.into_iter().zip(ranks).collect();
    let get = |k: (i64, i64)| -> Result<u64> {
        match &ranks[&k] {
            Ok(r) => Ok(*r),
            Err(Error::Budget { what, needed, cap }) => Err(Error::Budget {
                what: what.clone(),
                needed: *needed,
                cap: *cap,
            }),
            Err(Error::ResourceLimit { bits, max_bits }) => Err(Error::ResourceLimit {
                bits: *bits,
                max_bits: *max_bits,
            }),
            Err(e) => Err(Error::Internal(e.to_string())),
        }
    };
    cells
        .iter()
        .zip(middles)
        .map(|(&(p, q), mid)| {
            let res = (|| {
                let e = engine.middle_degree(q);
                let middle = mid.ok_or_else(|| Error::Budget {
                    what: format!("middle term of K_{{{p},{q}}}"),
                    needed: u128::MAX,
                    cap: engine.config().max_entries,
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
                let rank_out = get((p as i64, e))?;
                let rank_in = get((p as i64 + 1, e - d))?;
                Ok(CellResult {
                    p,
                    q,
                    value: middle - rank_out - rank_in,
                    middle_dim: middle,
                    rank_out,
                    rank_in,
                })
            })();
            ((p, q), res)
        })
        .collect()
}

/// A table whose computation stopped on a budget; completed cells are kept.
#[derive(Clone, Debug)]
pub struct PartialTable {
    pub table: BettiTable,
    pub completed: BTreeSet<(usize, i64)>,
    pub missing: Vec<((usize, i64), String)>,
}

impl fmt::Display for PartialTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} of {} cells computed; first failure: {}",
            self.completed.len(),
            self.completed.len() + self.missing.len(),
            self.missing.first().map_or("none", |m| m.1.as_str())
        )
    }
}

/// Outcome of a full-table computation.
#[derive(Debug)]
pub enum TableError {
    Partial(Box<PartialTable>),
    Other(Error),
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::Partial(p) => write!(f, "budget exceeded: {p}"),
            TableError::Other(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for TableError {}

impl From<Error> for TableError {
    fn from(e: Error) -> Self {
        TableError::Other(e)
    }
}

/// Assembles a table from computed cells; any failed cell turns the result partial.
pub fn assemble_table(
    ctx: RingContext,
    field: FieldTag,
    results: impl IntoIterator<Item = ((usize, i64), Result<CellResult>)>,
) -> std::result::Result<BettiTable, TableError> {
    let mut table = BettiTable::new(TableSource::Veronese(ctx), field, Method::Engine);
    let mut completed = BTreeSet::new();
    let mut missing = Vec::new();
    for (cell, res) in results {
        match res {
            Ok(c) => {
                table.set(cell.0, cell.1, c.value);
                completed.insert(cell);
            }
            Err(e @ (Error::Budget { .. } | Error::ResourceLimit { .. })) => missing.push((cell, e.to_string())),
            Err(e) => return Err(TableError::Other(e)),
        }
    }
    if missing.is_empty() {
        Ok(table)
    } else {
        Err(TableError::Partial(Box::new(PartialTable {
            table,
            completed,
            missing,
        })))
    }
}

/// Every `k_{p,q}(n, b; d)` over `field`.
pub fn betti_table(ctx: RingContext, field: FieldChoice) -> std::result::Result<BettiTable, TableError> {
    betti_table_with(ctx, field, &EngineConfig::default())
}

pub fn betti_table_with(
    ctx: RingContext,
    field: FieldChoice,
    cfg: &EngineConfig,
) -> std::result::Result<BettiTable, TableError> {
    let engine = Engine::new(ctx, *cfg);
    let cells = table_cells(&ctx);
    assemble_table(ctx, FieldTag::Field(field), compute_cells(&engine, field, &cells))
}

/// Table at several primes with every disagreeing cell listed.
#[derive(Clone, Debug)]
pub struct MultiPrimeTable {
    /// Entries are the smallest candidates (largest ranks seen).
    pub table: BettiTable,
    pub cells: Vec<MultiPrimeCell>,
}

impl MultiPrimeTable {
    pub fn disagreements(&self) -> Vec<&MultiPrimeCell> {
        self.cells.iter().filter(|c| !c.agree()).collect()
    }
}

pub fn betti_table_multi(ctx: RingContext, primes: &[u32], cfg: &EngineConfig) -> Result<MultiPrimeTable> {
    for &p in primes {
        FieldChoice::prime(p)?;
    }
    let engine = Engine::new(ctx, *cfg);
    let cells = table_cells(&ctx);
    let results = par::map_slice(&cells, |&(p, q)| engine.kpq_multi(p, q, primes));
    let mut table = BettiTable::new(
        TableSource::Veronese(ctx),
        FieldTag::MultiPrime(primes.to_vec()),
        Method::Engine,
    );
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        let c = r?;
        table.set(c.p, c.q, c.estimate);
        out.push(c);
    }
    Ok(MultiPrimeTable { table, cells: out })
}

/// Converts a rational entry to `f64` for plotting-oriented output.
pub fn rational_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
