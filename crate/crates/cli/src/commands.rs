use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use clap::{Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::json;
use syzlab_core::acceptance::{self, CriterionReport};
use syzlab_core::boij_soderberg::{
    decompose_with, pure_table, sample_profiles, synthesize, synthesize_full, CoeffDistribution, PeelOrder,
    DEFAULT_GRID,
};
use syzlab_core::certificates::{
    build_certificate, default_target, family_lower_bound, verify_certificate, verify_certificate_linear,
};
use syzlab_core::koszul::{
    assemble_table, betti_table_multi, brute_kpq_with, compute_cells, hilbert_check, table_cells, table_from_csv,
    BettiTable, CellResult, Engine, EngineConfig, FieldTag, OracleMode, TableError,
};
use syzlab_core::predictors::{
    asymptotic_window, cm_range, counterexample_watch, curve_gaussian_normalized, curve_kp1, curve_support,
    np_thresholds, veronese_range, veronese_support, CurveTwist, Family, SupportPrediction,
};
use syzlab_core::{Error, FieldChoice, Monomial, RingContext};

use crate::cache::{Cache, CacheKey, CacheRecord};
use crate::{Format, Global, Instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureKind {
    Usage,
    Budget,
    Inconsistent,
    Other,
}

impl FailureKind {
    pub fn code(self) -> u8 {
        match self {
            FailureKind::Usage => 2,
            FailureKind::Budget => 3,
            FailureKind::Inconsistent => 4,
            FailureKind::Other => 1,
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
    /// Output that is still worth printing, e.g. the completed part of a table.
    pub partial: Option<String>,
}

impl Failure {
    fn new(kind: FailureKind, message: impl Into<String>) -> Self {
        Failure {
            kind,
            message: message.into(),
            partial: None,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::InvalidParameters(_)
            | Error::Precondition(_)
            | Error::Parse(_)
            | Error::Domain(_)
            | Error::NotEnoughAnnihilators { .. } => FailureKind::Usage,
            Error::Budget { .. } | Error::ResourceLimit { .. } => FailureKind::Budget,
            Error::Internal(_) => FailureKind::Inconsistent,
            Error::NotInPureCone(_) => FailureKind::Other,
        };
        Failure::new(kind, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(FailureKind::Other, e.to_string())
    }
}

type Out = Result<String, Failure>;

fn json_out(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serialises");
    s.push('\n');
    s
}

fn field(g: &Global) -> Result<FieldChoice, Failure> {
    Ok(FieldChoice::parse(&g.field)?)
}

fn engine_config(g: &Global) -> EngineConfig {
    let mut cfg = EngineConfig::default();
    if let Some(b) = g.budget {
        cfg.max_entries = b as u128;
    }
    cfg
}

fn context(inst: Instance) -> Result<RingContext, Failure> {
    Ok(RingContext::new(inst.n, inst.b, inst.d)?)
}

fn open_cache(g: &Global) -> Result<Option<Cache>, Failure> {
    match &g.cache_dir {
        Some(dir) => Ok(Some(Cache::open(dir).map_err(|e| {
            Failure::new(FailureKind::Usage, format!("cache directory {}: {e}", dir.display()))
        })?)),
        None => Ok(None),
    }
}

fn cache_key(ctx: &RingContext, p: usize, q: i64, f: FieldChoice) -> CacheKey {
    CacheKey::new(ctx.n, ctx.b, ctx.d, p, q, f.tag())
}

fn store(cache: &Cache, key: CacheKey, cell: &CellResult, ms: u64) {
    if let Err(e) = cache.put(&CacheRecord::from_cell(key, cell, ms)) {
        eprintln!("warning: could not write cache record: {e}");
    }
}

pub fn kpq(g: &Global, inst: Instance, p: usize, q: i64) -> Out {
    let ctx = context(inst)?;
    let engine = Engine::new(ctx, engine_config(g));
    if !g.primes.is_empty() {
        let cell = engine.kpq_multi(p, q, &g.primes)?;
        if !cell.agree() {
            eprintln!("warning: primes disagree: {:?}; reporting the smallest value", cell.per_prime);
        }
        let tag = FieldTag::MultiPrime(g.primes.clone()).to_string();
        return Ok(match g.format {
            Format::Diagram => format!("{}\n", cell.estimate),
            Format::Csv => format!("p,q,value,field,method\n{p},{q},{},{tag},engine\n", cell.estimate),
            Format::Json => json_out(&json!({
                "n": ctx.n, "b": ctx.b, "d": ctx.d, "p": p, "q": q,
                "value": cell.estimate, "field": tag,
                "per_prime": cell.per_prime.iter().map(|(pr, v)| json!({"prime": pr, "value": v})).collect::<Vec<_>>(),
            })),
        });
    }
    let f = field(g)?;
    let cache = open_cache(g)?;
    let key = cache_key(&ctx, p, q, f);
    let cell = match cache.as_ref().and_then(|c| c.get(&key)) {
        Some(rec) => rec.cell(),
        None => {
            let start = Instant::now();
            let cell = engine.kpq(p, q, f)?;
            if let Some(c) = &cache {
                store(c, key, &cell, start.elapsed().as_millis() as u64);
            }
            cell
        }
    };
    Ok(match g.format {
        Format::Diagram => format!("{}\n", cell.value),
        Format::Csv => format!("p,q,value,field,method\n{p},{q},{},{},engine\n", cell.value, f.tag()),
        Format::Json => json_out(&json!({
            "n": ctx.n, "b": ctx.b, "d": ctx.d, "p": p, "q": q,
            "value": cell.value, "field": f.tag(),
            "middle_dim": cell.middle_dim, "rank_out": cell.rank_out, "rank_in": cell.rank_in,
        })),
    })
}

fn render_table(t: &BettiTable, format: Format, missing: &BTreeSet<(usize, i64)>) -> String {
    match format {
        Format::Diagram => {
            if missing.is_empty() {
                t.render_diagram()
            } else {
                let pmax = missing.iter().map(|c| c.0).chain(t.max_p()).max().unwrap_or(0);
                let (mut qlo, mut qhi) = t.q_range().unwrap_or((i64::MAX, i64::MIN));
                for &(_, q) in missing {
                    qlo = qlo.min(q);
                    qhi = qhi.max(q);
                }
                t.render_span(pmax, qlo, qhi, |p, q| {
                    if missing.contains(&(p, q)) {
                        "?".into()
                    } else {
                        let v = t.get(p, q);
                        if v == 0 {
                            "-".into()
                        } else {
                            v.to_string()
                        }
                    }
                })
            }
        }
        Format::Csv => t.to_csv(),
        Format::Json => {
            let mut v = t.to_json();
            if !missing.is_empty() {
                v["missing"] = json!(missing.iter().map(|(p, q)| json!({"p": p, "q": q})).collect::<Vec<_>>());
            }
            json_out(&v)
        }
    }
}

fn check_table(t: &BettiTable, watch: bool) -> Result<(), Failure> {
    let rep = hilbert_check(t);
    if !rep.passed {
        return Err(Failure::new(
            FailureKind::Inconsistent,
            format!(
                "Hilbert identity fails on the computed table ({} mismatches, first at t^{})",
                rep.mismatches.len(),
                rep.mismatches[0].0
            ),
        ));
    }
    if watch {
        let w = counterexample_watch(t)?;
        if !w.findings.is_empty() {
            eprint!("{w}");
        }
    }
    Ok(())
}

pub fn table(g: &Global, inst: Instance, watch: bool) -> Out {
    let ctx = context(inst)?;
    let cfg = engine_config(g);
    if !g.primes.is_empty() {
        let multi = betti_table_multi(ctx, &g.primes, &cfg)?;
        for c in multi.disagreements() {
            eprintln!("warning: primes disagree at K_{{{},{}}}: {:?}", c.p, c.q, c.per_prime);
        }
        check_table(&multi.table, watch)?;
        return Ok(render_table(&multi.table, g.format, &BTreeSet::new()));
    }
    let f = field(g)?;
    let cache = open_cache(g)?;
    let engine = Engine::new(ctx, cfg);
    let cells = table_cells(&ctx);
    let mut results: Vec<((usize, i64), Result<CellResult, Error>)> = Vec::with_capacity(cells.len());
    let mut todo = Vec::new();
    for &(p, q) in &cells {
        match cache.as_ref().and_then(|c| c.get(&cache_key(&ctx, p, q, f))) {
            Some(rec) => results.push(((p, q), Ok(rec.cell()))),
            None => todo.push((p, q)),
        }
    }
    if !todo.is_empty() {
        let start = Instant::now();
        let computed = compute_cells(&engine, f, &todo);
        let ms = start.elapsed().as_millis() as u64;
        for ((p, q), res) in computed {
            if let (Some(c), Ok(cell)) = (&cache, &res) {
                store(c, cache_key(&ctx, p, q, f), cell, ms);
            }
            results.push(((p, q), res));
        }
    }
    results.sort_by_key(|r| r.0);
    match assemble_table(ctx, FieldTag::Field(f), results) {
        Ok(t) => {
            check_table(&t, watch)?;
            Ok(render_table(&t, g.format, &BTreeSet::new()))
        }
        Err(TableError::Partial(part)) => {
            let missing: BTreeSet<(usize, i64)> = part.missing.iter().map(|m| m.0).collect();
            let mut fail = Failure::new(
                FailureKind::Budget,
                format!("{part}; completed cells are cached when --cache-dir is set, raise --budget to finish"),
            );
            fail.partial = Some(render_table(&part.table, g.format, &missing));
            Err(fail)
        }
        Err(TableError::Other(e)) => Err(e.into()),
    }
}

fn parse_target(s: &str, ctx: &RingContext) -> Result<Monomial, Failure> {
    Ok(Monomial::parse(s, ctx.nvars())?)
}

#[allow(clippy::too_many_arguments)]
pub fn certify(
    g: &Global,
    inst: Instance,
    q: i64,
    extra: usize,
    target: Option<&str>,
    linear: bool,
    out: Option<&Path>,
) -> Out {
    let ctx = context(inst)?;
    let target = match target {
        Some(t) => parse_target(t, &ctx)?,
        None => default_target(ctx.n, ctx.b, ctx.d, q)?,
    };
    let built = build_certificate(&target, extra, ctx, q)?;
    let cert = if linear {
        verify_certificate_linear(&built)?
    } else {
        verify_certificate(&built)?
    };
    let bound = if cert.is_valid() {
        family_lower_bound(&target, cert.p, &ctx, q)?
    } else {
        0
    };
    let text = cert.to_json();
    if let Some(path) = out {
        std::fs::write(path, format!("{text}\n"))?;
    }
    let rendered = match g.format {
        Format::Json => format!("{text}\n"),
        Format::Csv => {
            let lc = cert.linear_check.as_ref();
            format!(
                "n,b,d,p,q,target,is_cycle,is_combinatorially_nonbounding,linear_field,in_image,family_lower_bound\n{},{},{},{},{},{},{},{},{},{},{}\n",
                cert.n,
                cert.b,
                cert.d,
                cert.p,
                cert.q,
                cert.target,
                cert.is_cycle,
                cert.is_combinatorially_nonbounding,
                lc.map_or(String::new(), |l| l.field.clone()),
                lc.map_or(String::new(), |l| l.in_image.to_string()),
                bound
            )
        }
        Format::Diagram => {
            let yes = |b: bool| if b { "yes" } else { "no" };
            let mut s = format!("certificate for K_{{{},{}}}({},{};{})\n", cert.p, cert.q, cert.n, cert.b, cert.d);
            let _ = writeln!(s, "target: {}", cert.target);
            let wedge: Vec<String> = cert.wedge.iter().map(|m| m.to_string()).collect();
            let _ = writeln!(s, "wedge ({} factors): {}", cert.p, wedge.join(" ^ "));
            let _ = writeln!(s, "cycle: {}", yes(cert.is_cycle));
            let _ = writeln!(s, "non-bounding (combinatorial): {}", yes(cert.is_combinatorially_nonbounding));
            if let Some(l) = &cert.linear_check {
                let _ = writeln!(
                    s,
                    "linear check over {}: {} ({} x {} block)",
                    l.field,
                    if l.in_image { "boundary" } else { "not a boundary" },
                    l.block_rows,
                    l.block_cols
                );
            }
            let _ = writeln!(s, "valid: {}", yes(cert.is_valid()));
            if cert.is_valid() {
                let _ = writeln!(s, "family lower bound: k_{{{},{}}} >= {}", cert.p, cert.q, bound);
            }
            s
        }
    };
    if let Some(l) = &cert.linear_check {
        if l.in_image && cert.is_combinatorially_nonbounding && l.field == "Q" {
            let mut f = Failure::new(
                FailureKind::Inconsistent,
                "combinatorially non-bounding cocycle found in the image over Q",
            );
            f.partial = Some(rendered);
            return Err(f);
        }
    }
    if !cert.is_valid() {
        let mut f = Failure::new(FailureKind::Other, "certificate does not verify");
        f.partial = Some(rendered);
        return Err(f);
    }
    Ok(rendered)
}

fn render_support(s: &SupportPrediction, format: Format) -> String {
    match format {
        Format::Diagram => {
            let mut out = format!("{}\n{}{}", s.title, s.render_diagram(), s.legend());
            for n in &s.notes {
                let _ = writeln!(out, "note: {n}");
            }
            out
        }
        Format::Csv => s.to_csv(),
        Format::Json => json_out(&s.to_json()),
    }
}

pub fn predict(g: &Global, inst: Instance) -> Out {
    let ctx = context(inst)?;
    Ok(render_support(&veronese_support(ctx), g.format))
}

#[derive(Subcommand, Clone, Debug)]
pub enum RangeCmd {
    /// Non-vanishing range of K_{p,q}(n, b; d) from monomial cocycles.
    Veronese {
        #[command(flatten)]
        inst: Instance,
        #[arg(short = 'q', long)]
        q: i64,
    },
    /// Range for a projectively Cohen-Macaulay variety.
    Cm {
        /// Degree of X.
        #[arg(long)]
        degree: u64,
        /// Dimension of X.
        #[arg(long)]
        dim: usize,
        /// Regularity index c.
        #[arg(long, default_value_t = 0)]
        reg: i64,
        #[arg(short = 'b', long, allow_hyphen_values = true, default_value_t = 0)]
        b: i64,
        #[arg(short = 'd', long)]
        d: u32,
        #[arg(short = 'q', long)]
        q: i64,
        /// h^0(O_X(d)).
        #[arg(long)]
        rd: i64,
    },
    /// Whether property (N_k) is decided by the family's threshold.
    Threshold {
        #[arg(long, value_enum)]
        family: FamilyKind,
        /// Dimension (or genus for curves).
        #[arg(short = 'n', long)]
        n: u64,
        #[arg(short = 'd', long)]
        d: u64,
        #[arg(short = 'k', long)]
        k: u64,
    },
    /// The window C1 d^{q-1} <= p <= r_d - C2 d^{n-1}.
    Window {
        #[arg(short = 'n', long)]
        n: u32,
        #[arg(short = 'q', long)]
        q: u32,
        #[arg(long)]
        rd: i64,
        #[arg(short = 'd', long)]
        d: u64,
        #[arg(long)]
        c1: f64,
        #[arg(long)]
        c2: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Curve,
    Veronese,
    Adjoint,
    Abelian,
}

fn range_out(format: Format, label: &str, fields: serde_json::Value, lo: i64, hi: i64) -> String {
    match format {
        Format::Diagram => {
            if lo > hi {
                format!("{label}: empty range [{lo}, {hi}]\n")
            } else {
                format!("{label}: {lo} <= p <= {hi}\n")
            }
        }
        Format::Csv => {
            let obj = fields.as_object().expect("object");
            let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
            let vals: Vec<String> = obj.values().map(|v| v.to_string()).collect();
            format!("{},lo,hi\n{},{lo},{hi}\n", keys.join(","), vals.join(","))
        }
        Format::Json => {
            let mut v = fields;
            v["lo"] = json!(lo);
            v["hi"] = json!(hi);
            json_out(&v)
        }
    }
}

pub fn range(g: &Global, c: RangeCmd) -> Out {
    match c {
        RangeCmd::Veronese { inst, q } => {
            let (lo, hi) = veronese_range(inst.n, inst.b, inst.d, q)?;
            Ok(range_out(
                g.format,
                &format!("K_{{p,{q}}}({},{};{}) != 0", inst.n, inst.b, inst.d),
                json!({"n": inst.n, "b": inst.b, "d": inst.d, "q": q}),
                lo,
                hi,
            ))
        }
        RangeCmd::Cm {
            degree,
            dim,
            reg,
            b,
            d,
            q,
            rd,
        } => {
            let (lo, hi) = cm_range(degree, dim, reg, b, d, q, rd)?;
            Ok(range_out(
                g.format,
                &format!("K_{{p,{q}}} != 0 (degree {degree}, dim {dim}, c={reg}, b={b}, d={d})"),
                json!({"degree": degree, "dim": dim, "reg": reg, "b": b, "d": d, "q": q, "rd": rd}),
                lo,
                hi,
            ))
        }
        RangeCmd::Threshold { family, n, d, k } => {
            let fam = match family {
                FamilyKind::Curve => Family::Curve { g: n, d },
                FamilyKind::Veronese => Family::Veronese { n, d },
                FamilyKind::Adjoint => Family::Adjoint { n, d },
                FamilyKind::Abelian => Family::Abelian { n, d },
            };
            let (verdict, why) = np_thresholds(fam, k);
            Ok(match g.format {
                Format::Diagram => format!("(N_{k}) {verdict}: {why}\n"),
                Format::Csv => format!("family,n,d,k,verdict,reason\n{family:?},{n},{d},{k},{verdict},\"{why}\"\n"),
                Format::Json => json_out(&json!({
                    "family": format!("{family:?}").to_lowercase(), "n": n, "d": d, "k": k,
                    "verdict": verdict, "reason": why,
                })),
            })
        }
        RangeCmd::Window { n, q, rd, d, c1, c2 } => {
            let w = asymptotic_window(n, q, rd, d, c1, c2);
            Ok(range_out(
                g.format,
                &format!("window for n={n}, q={q}, d={d}"),
                json!({"n": n, "q": q, "rd": rd, "d": d, "c1": c1, "c2": c2}),
                w.lo,
                w.hi,
            ))
        }
    }
}

#[derive(Subcommand, Clone, Debug)]
pub enum CurveCmd {
    /// k_{p,1} of a degree-d embedding of a genus-g curve.
    Kp1 {
        #[arg(short = 'g', long)]
        g: u64,
        #[arg(short = 'd', long)]
        d: u64,
        /// One column; all of 1..=d-2g when omitted.
        #[arg(short = 'p', long)]
        p: Option<u64>,
    },
    /// 2^{-r} sqrt(2 pi / r) k_{p,1} at p = round(r/2 + a sqrt(r)/2).
    Gaussian {
        #[arg(short = 'g', long)]
        g: u64,
        #[arg(short = 'd', long)]
        d: u64,
        #[arg(short = 'a', long, allow_hyphen_values = true)]
        a: f64,
    },
    /// Support map of K_{p,q}(C, B; L) for B = O or B = K.
    Support {
        #[arg(short = 'g', long)]
        g: u64,
        #[arg(long)]
        gon: u64,
        #[arg(short = 'd', long)]
        d: u64,
        /// Twist by the canonical bundle.
        #[arg(long)]
        canonical: bool,
    },
}

pub fn curve(gl: &Global, c: CurveCmd) -> Out {
    match c {
        CurveCmd::Kp1 { g, d, p } => {
            let ps: Vec<u64> = match p {
                Some(p) => vec![p],
                None => (1..=d.saturating_sub(2 * g)).collect(),
            };
            let mut rows = Vec::new();
            for p in ps {
                rows.push((p, curve_kp1(g, d, p)?));
            }
            Ok(match gl.format {
                Format::Diagram => rows.iter().map(|(p, k)| format!("k_{{{p},1}} = {k}\n")).collect(),
                Format::Csv => {
                    let mut s = String::from("g,d,p,k\n");
                    for (p, k) in &rows {
                        let _ = writeln!(s, "{g},{d},{p},{k}");
                    }
                    s
                }
                Format::Json => json_out(&json!({
                    "g": g, "d": d,
                    "values": rows.iter().map(|(p, k)| json!({"p": p, "k": k.to_string()})).collect::<Vec<_>>(),
                })),
            })
        }
        CurveCmd::Gaussian { g, d, a } => {
            let v = curve_gaussian_normalized(g, d, a)?;
            let limit = (-a * a / 2.0).exp();
            Ok(match gl.format {
                Format::Diagram => format!("{v:.6} (limit {limit:.6}, error {:.6})\n", (v - limit).abs()),
                Format::Csv => format!("g,d,a,value,limit\n{g},{d},{a},{v:.10},{limit:.10}\n"),
                Format::Json => json_out(&json!({"g": g, "d": d, "a": a, "value": v, "limit": limit})),
            })
        }
        CurveCmd::Support { g, gon, d, canonical } => {
            let twist = if canonical { CurveTwist::Canonical } else { CurveTwist::Trivial };
            Ok(render_support(&curve_support(g, gon, d, twist)?, gl.format))
        }
    }
}

#[derive(Subcommand, Clone, Debug)]
pub enum BsCmd {
    /// The pure table Pi_i of length r.
    Pure {
        #[arg(short = 'i', long)]
        i: usize,
        #[arg(short = 'r', long)]
        r: usize,
    },
    /// Decompose a two-row table given as CSV `p,q,value[,field,method]` (`-` for stdin).
    Decompose {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value_t = Order::Low)]
        order: Order,
    },
    /// sum x_i Pi_i from comma-separated rationals (r or r+2 of them).
    Synthesize {
        #[arg(short = 'r', long)]
        r: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Vec<String>,
    },
    /// Random-coefficient profile statistics.
    Sample {
        #[arg(short = 'r', long)]
        r: usize,
        #[arg(short = 'N', long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value = "uniform")]
        dist: String,
        /// Comma-separated values of a.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        grid: Vec<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Low,
    High,
}

fn rational_table_out(t: &BettiTable<BigRational>, format: Format) -> String {
    match format {
        Format::Diagram => t.render_diagram(),
        Format::Csv => t.to_csv(),
        Format::Json => json_out(&t.to_json()),
    }
}

pub fn bs(g: &Global, c: BsCmd) -> Out {
    match c {
        BsCmd::Pure { i, r } => Ok(rational_table_out(&pure_table(i, r)?.to_table(), g.format)),
        BsCmd::Decompose { input, order } => {
            let text = if input == "-" {
                std::io::read_to_string(std::io::stdin())?
            } else {
                std::fs::read_to_string(&input)?
            };
            let t = table_from_csv(&text)?;
            let order = match order {
                Order::Low => PeelOrder::LowCorner,
                Order::High => PeelOrder::HighCorner,
            };
            let dec = decompose_with(&t, order)?;
            Ok(match g.format {
                Format::Diagram => format!("{dec}\n"),
                Format::Csv => dec.to_csv(),
                Format::Json => json_out(&json!({
                    "r": dec.r,
                    "coeffs": dec.coeffs.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                })),
            })
        }
        BsCmd::Synthesize { r, coeffs } => {
            let x = coeffs
                .iter()
                .map(|s| {
                    s.trim()
                        .parse::<BigRational>()
                        .map_err(|_| Failure::new(FailureKind::Usage, format!("bad coefficient `{s}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let t = if x.len() == r + 2 { synthesize_full(&x, r)? } else { synthesize(&x, r)? };
            Ok(rational_table_out(&t, g.format))
        }
        BsCmd::Sample { r, samples, dist, grid } => {
            let dist = CoeffDistribution::parse(&dist)?;
            let grid = if grid.is_empty() { DEFAULT_GRID.to_vec() } else { grid };
            let stats = sample_profiles(r, samples, g.seed, dist, &grid)?;
            Ok(match g.format {
                Format::Diagram => {
                    let mut s = format!(
                        "r={} samples={} seed={} distribution={}\n{:>6} {:>5} {:>10} {:>10} {:>10} {:>10} {:>10}\n",
                        stats.r, stats.samples, stats.seed, stats.distribution, "a", "p", "median", "p10", "p90", "gauss", "|err|"
                    );
                    for row in &stats.rows {
                        let _ = writeln!(
                            s,
                            "{:>6} {:>5} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
                            row.a, row.p, row.median_rho, row.p10, row.p90, row.gauss_ref, row.abs_err_median
                        );
                    }
                    s
                }
                Format::Csv => stats.to_csv(),
                Format::Json => json_out(&serde_json::to_value(&stats).expect("stats serialise")),
            })
        }
    }
}

pub fn oracle(g: &Global, inst: Instance, p: usize, q: i64, unreduced: bool) -> Out {
    let ctx = context(inst)?;
    let mode = if unreduced { OracleMode::Unreduced } else { OracleMode::Reduced };
    let brute = brute_kpq_with(ctx, p, q, mode)?;
    let engine = Engine::new(ctx, engine_config(g)).kpq(p, q, FieldChoice::Rational)?.value;
    let out = match g.format {
        Format::Diagram => format!(
            "oracle ({}) {brute}, engine over Q {engine}: {}\n",
            if unreduced { "unreduced" } else { "reduced" },
            if brute == engine { "agree" } else { "DISAGREE" }
        ),
        Format::Csv => format!("p,q,oracle,engine,mode\n{p},{q},{brute},{engine},{mode:?}\n"),
        Format::Json => json_out(&json!({
            "n": ctx.n, "b": ctx.b, "d": ctx.d, "p": p, "q": q,
            "oracle": brute, "engine": engine, "mode": format!("{mode:?}").to_lowercase(),
        })),
    };
    if brute != engine {
        let mut f = Failure::new(FailureKind::Inconsistent, "engine and oracle disagree");
        f.partial = Some(out);
        return Err(f);
    }
    Ok(out)
}

fn run_criterion(id: u8, seed: u64) -> Option<CriterionReport> {
    Some(match id {
        1 => acceptance::criterion_1(),
        2 => acceptance::criterion_2(),
        3 => acceptance::criterion_3(),
        4 => acceptance::criterion_4(),
        5 => acceptance::criterion_5(seed),
        6 => acceptance::criterion_6(),
        7 => acceptance::criterion_7(seed),
        8 => acceptance::criterion_8(),
        9 => acceptance::criterion_9(seed),
        10 => acceptance::criterion_10(seed),
        11 => acceptance::watch_check(),
        _ => return None,
    })
}

pub fn selftest(g: &Global, only: &[u8]) -> Out {
    let ids: Vec<u8> = if only.is_empty() { (1..=11).collect() } else { only.to_vec() };
    let mut reports = Vec::new();
    for id in ids {
        let r = run_criterion(id, g.seed)
            .ok_or_else(|| Failure::new(FailureKind::Usage, format!("no criterion {id} (1-11)")))?;
        reports.push(r);
    }
    let out = match g.format {
        Format::Diagram => reports.iter().map(|r| format!("{}\n", r.line())).collect(),
        Format::Csv => {
            let mut s = String::from("id,name,passed,documented_deviation\n");
            for r in &reports {
                let _ = writeln!(s, "{},{},{},{}", r.id, r.name, r.passed, r.deviation.is_some());
            }
            s
        }
        Format::Json => json_out(&json!(reports
            .iter()
            .map(|r| json!({
                "id": r.id, "name": r.name, "passed": r.passed,
                "deviation": r.deviation, "detail": r.detail,
            }))
            .collect::<Vec<_>>())),
    };
    let failed: Vec<u8> = reports.iter().filter(|r| !r.acceptable()).map(|r| r.id).collect();
    if failed.is_empty() {
        Ok(out)
    } else {
        let mut f = Failure::new(FailureKind::Other, format!("failed criteria: {failed:?}"));
        f.partial = Some(out);
        Err(f)
    }
}
