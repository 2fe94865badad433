use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::json;

use crate::koszul::render_grid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Nonzero,
    Zero,
    Unknown,
}

/// Strength of the statement behind a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// Forced by the shape of the complex (an empty term).
    Structural,
    /// A proved theorem whose hypotheses are met.
    Theorem,
    /// A "for d large" statement applied under the explicit proxy bound.
    Proxy,
    /// Conjectural; never folded into a proved zero.
    Conjecture,
    /// Nothing applies.
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellVerdict {
    pub verdict: Verdict,
    pub basis: Basis,
    /// Short citation tag, see [`SupportPrediction::legend`].
    pub tag: &'static str,
}

impl CellVerdict {
    pub fn new(verdict: Verdict, basis: Basis, tag: &'static str) -> Self {
        CellVerdict { verdict, basis, tag }
    }

    pub fn unknown() -> Self {
        CellVerdict::new(Verdict::Unknown, Basis::None, "none")
    }

    /// Proved (or structural) non-vanishing.
    pub fn certain_nonzero(&self) -> bool {
        self.verdict == Verdict::Nonzero && matches!(self.basis, Basis::Theorem | Basis::Structural)
    }

    /// Cell text for diagrams: `+` nonzero, `0` zero, `0?` conjectural zero,
    /// `?` unknown, followed by the tag letter.
    pub fn symbol(&self) -> String {
        let s = match (self.verdict, self.basis) {
            (Verdict::Unknown, _) => "?",
            (Verdict::Nonzero, Basis::Conjecture) => "+?",
            (Verdict::Nonzero, _) => "+",
            (Verdict::Zero, Basis::Conjecture) => "0?",
            (Verdict::Zero, _) => "0",
        };
        let letter = TAGS.iter().find(|t| t.0 == self.tag).map_or("", |t| t.1);
        format!("{s}{letter}")
    }
}

/// `(tag, letter, description)`.
const TAGS: &[(&str, &str, &str)] = &[
    ("empty", "x", "middle term of the strand is zero"),
    ("easy", "e", "extremal rows: q = 0 iff p <= r(B); q = n+1 window; zero for q >= n+2"),
    ("range", "r", "explicit monomial cocycles: non-vanishing range for 0 <= q <= n, d >= b+q+1"),
    ("extremal", "t", "range is sharp in weights 0 and n (d large)"),
    ("conj", "c", "conjectured vanishing outside the non-vanishing range"),
    ("gonality", "g", "K_{p,1} read off from gonality (d >= 4g-3)"),
    ("weight-one", "w", "weight-one row forced by the extremal rows"),
    ("length", "l", "beyond the length of the resolution"),
    ("none", "", "no statement applies"),
];

/// A `(p, q) -> verdict` map with citations and free-form notes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupportPrediction {
    pub title: String,
    pub cells: BTreeMap<(usize, i64), CellVerdict>,
    pub notes: Vec<String>,
}

impl SupportPrediction {
    pub fn new(title: impl Into<String>) -> Self {
        SupportPrediction {
            title: title.into(),
            cells: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn set(&mut self, p: usize, q: i64, v: CellVerdict) {
        self.cells.insert((p, q), v);
    }

    pub fn get(&self, p: usize, q: i64) -> Option<&CellVerdict> {
        self.cells.get(&(p, q))
    }

    pub fn verdict(&self, p: usize, q: i64) -> Verdict {
        self.get(p, q).map_or(Verdict::Unknown, |c| c.verdict)
    }

    /// Cells of row `q` with the given verdict, in increasing `p`.
    pub fn row(&self, q: i64, verdict: Verdict) -> Vec<usize> {
        self.cells
            .iter()
            .filter(|((_, qq), c)| *qq == q && c.verdict == verdict)
            .map(|((p, _), _)| *p)
            .collect()
    }

    pub fn legend(&self) -> String {
        let mut used: Vec<&str> = self.cells.values().map(|c| c.tag).collect();
        used.sort_unstable();
        used.dedup();
        let mut s = String::from("+ nonzero, 0 zero, 0? conjectural zero, ? unknown\n");
        for (tag, letter, desc) in TAGS {
            if used.contains(tag) && !letter.is_empty() {
                s.push_str(&format!("{letter} [{tag}] {desc}\n"));
            }
        }
        s
    }

    /// Annotated diagram: rows `q`, columns `p`, then the legend and notes.
    pub fn render_diagram(&self) -> String {
        let pmax = self.cells.keys().map(|k| k.0).max().unwrap_or(0);
        let qlo = self.cells.keys().map(|k| k.1).min().unwrap_or(0);
        let qhi = self.cells.keys().map(|k| k.1).max().unwrap_or(0);
        let mut s = format!("{}\n", self.title);
        s.push_str(&render_grid(pmax, qlo, qhi, |p, q| {
            self.get(p, q).map_or_else(|| ".".to_string(), CellVerdict::symbol)
        }));
        s.push_str(&self.legend());
        for n in &self.notes {
            s.push_str(&format!("note: {n}\n"));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cells: Vec<serde_json::Value> = self
            .cells
            .iter()
            .map(|((p, q), c)| json!({"p": p, "q": q, "verdict": c.verdict, "basis": c.basis, "tag": c.tag}))
            .collect();
        json!({"title": self.title, "cells": cells, "notes": self.notes})
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("p,q,verdict,basis,tag\n");
        for ((p, q), c) in &self.cells {
            let v = serde_json::to_value(c.verdict).unwrap();
            let b = serde_json::to_value(c.basis).unwrap();
            s.push_str(&format!("{p},{q},{},{},{}\n", v.as_str().unwrap(), b.as_str().unwrap(), c.tag));
        }
        s
    }
}

impl fmt::Display for SupportPrediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_diagram())
    }
}
