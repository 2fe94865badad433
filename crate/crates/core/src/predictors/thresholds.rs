use std::fmt;

use serde::Serialize;

/// Families with a known `(N_k)` threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Degree-`d` line bundle on a genus-`g` curve.
    Curve { g: u64, d: u64 },
    /// `O(d)` on `P^n`.
    Veronese { n: u64, d: u64 },
    /// `K_X + dB + P` on an `n`-fold, `B` very ample and `P` nef.
    Adjoint { n: u64, d: u64 },
    /// `O(d Theta)` on an abelian `n`-fold.
    Abelian { n: u64, d: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdVerdict {
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for ThresholdVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThresholdVerdict::Holds => "holds",
            ThresholdVerdict::Fails => "fails",
            ThresholdVerdict::Unknown => "unknown",
        })
    }
}

/// Whether `(N_k)` is decided by the family's threshold, with the reason.
pub fn np_thresholds(family: Family, k: u64) -> (ThresholdVerdict, String) {
    use ThresholdVerdict::*;
    match family {
        Family::Curve { g, d } => {
            let need = 2 * g + 1 + k;
            if d >= need {
                (Holds, format!("d = {d} >= 2g + 1 + k = {need}"))
            } else {
                (Unknown, format!("d = {d} < 2g + 1 + k = {need}"))
            }
        }
        Family::Veronese { n, d } => {
            if d >= k {
                (Holds, format!("d = {d} >= k = {k}"))
            } else if n >= 2 && d >= 3 && k + 2 >= 3 * d {
                (Fails, format!("n >= 2, d >= 3 and k = {k} >= 3d - 2 = {}", 3 * d - 2))
            } else {
                let mut why = format!("d = {d} < k = {k}");
                if n >= 2 && d >= 3 {
                    why.push_str(&format!(" < 3d - 2 = {}", 3 * d - 2));
                }
                if n == 2 && d >= 3 {
                    why.push_str("; on the plane the engine can settle it (k_{p,2} for p <= k)");
                }
                (Unknown, why)
            }
        }
        Family::Adjoint { n, d } => {
            let need = n + 1 + k;
            if d >= need {
                (Holds, format!("d = {d} >= n + 1 + k = {need}"))
            } else {
                (Unknown, format!("d = {d} < n + 1 + k = {need}"))
            }
        }
        Family::Abelian { d, .. } => {
            let need = k + 3;
            if d >= need {
                (Holds, format!("d = {d} >= k + 3 = {need}"))
            } else {
                (Unknown, format!("d = {d} < k + 3 = {need}"))
            }
        }
    }
}

/// The window `C1 d^{q-1} <= p <= r_d - C2 d^{n-1}` with user-supplied constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "empty ([{}, {}])", self.lo, self.hi)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

pub fn asymptotic_window(n: u32, q: u32, r_d: i64, d: u64, c1: f64, c2: f64) -> Window {
    let lo = (c1 * (d as f64).powi(q as i32 - 1)).ceil() as i64;
    let hi = (r_d as f64 - c2 * (d as f64).powi(n as i32 - 1)).floor() as i64;
    Window { lo, hi }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_examples() {
        assert_eq!(np_thresholds(Family::Curve { g: 2, d: 8 }, 3).0, ThresholdVerdict::Holds);
        assert_eq!(np_thresholds(Family::Curve { g: 2, d: 7 }, 3).0, ThresholdVerdict::Unknown);
        assert_eq!(np_thresholds(Family::Veronese { n: 2, d: 3 }, 7).0, ThresholdVerdict::Fails);
        assert_eq!(np_thresholds(Family::Veronese { n: 2, d: 3 }, 5).0, ThresholdVerdict::Unknown);
        assert_eq!(np_thresholds(Family::Veronese { n: 2, d: 3 }, 3).0, ThresholdVerdict::Holds);
        assert_eq!(np_thresholds(Family::Veronese { n: 1, d: 3 }, 9).0, ThresholdVerdict::Unknown);
        assert_eq!(np_thresholds(Family::Adjoint { n: 2, d: 6 }, 3).0, ThresholdVerdict::Holds);
        assert_eq!(np_thresholds(Family::Adjoint { n: 2, d: 5 }, 3).0, ThresholdVerdict::Unknown);
        assert_eq!(np_thresholds(Family::Abelian { n: 3, d: 5 }, 2).0, ThresholdVerdict::Holds);
        assert_eq!(np_thresholds(Family::Abelian { n: 3, d: 4 }, 2).0, ThresholdVerdict::Unknown);
    }

    #[test]
    fn windows() {
        assert_eq!(asymptotic_window(3, 2, 50, 7, 0.0, 0.0), Window { lo: 0, hi: 50 });
        assert_eq!(asymptotic_window(1, 1, 20, 9, 2.0, 3.0), Window { lo: 2, hi: 17 });
        let w = asymptotic_window(2, 2, 9, 3, 3.0, 1.0);
        assert_eq!(w, Window { lo: 9, hi: 6 });
        assert!(w.is_empty());
    }
}
