//! Streaming leading-term elimination.
//!
//! Vectors are inserted one at a time and reduced against the pivots found so
//! far; a vector whose remainder is nonzero becomes a new pivot, normalized to
//! leading coefficient one. Coordinates are positions in a fixed elimination
//! order chosen by the caller, so results depend only on that order.

use crate::error::Result;

use super::field::Field;

pub(crate) type SparseVec<E> = Vec<(u32, E)>;

/// `v - f * w` for sorted sparse vectors, dropping cancelled entries.
pub(crate) fn sub_scaled<F: Field>(
    field: &F,
    v: &[(u32, F::Elem)],
    f: &F::Elem,
    w: &[(u32, F::Elem)],
) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        if j == w.len() || (i < v.len() && v[i].0 < w[j].0) {
            out.push(v[i].clone());
            i += 1;
        } else if i == v.len() || w[j].0 < v[i].0 {
            out.push((w[j].0, field.neg(&field.mul(f, &w[j].1))));
            j += 1;
        } else {
            let x = field.sub(&v[i].1, &field.mul(f, &w[j].1));
            if !field.is_zero(&x) {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// `v + f * w`.
fn add_scaled<F: Field>(
    field: &F,
    v: &[(u32, F::Elem)],
    f: &F::Elem,
    w: &[(u32, F::Elem)],
) -> SparseVec<F::Elem> {
    sub_scaled(field, v, &field.neg(f), w)
}

fn scale<F: Field>(field: &F, v: &mut [(u32, F::Elem)], f: &F::Elem) {
    for e in v.iter_mut() {
        e.1 = field.mul(&e.1, f);
    }
}

struct Pivot<E> {
    vec: SparseVec<E>,
    /// Expression of `vec` in terms of the inserted vectors (when tracked).
    combo: SparseVec<E>,
}

pub(crate) struct Echelon<'f, F: Field> {
    field: &'f F,
    pivots: Vec<Option<Pivot<F::Elem>>>,
    rank: usize,
    track: bool,
}

impl<'f, F: Field> Echelon<'f, F> {
    pub fn new(field: &'f F, dim: usize, track: bool) -> Self {
        Echelon {
            field,
            pivots: (0..dim).map(|_| None).collect(),
            rank: 0,
            track,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Inserts `v` (the `label`-th input vector); returns whether it raised the rank.
    pub fn insert(&mut self, mut v: SparseVec<F::Elem>, label: u32) -> Result<bool> {
        let field = self.field;
        let mut combo = if self.track {
            vec![(label, field.one())]
        } else {
            Vec::new()
        };
        while let Some((lead, coef)) = v.first().cloned() {
            match &self.pivots[lead as usize] {
                Some(p) => {
                    v = sub_scaled(field, &v, &coef, &p.vec);
                    if self.track {
                        combo = sub_scaled(field, &combo, &coef, &p.combo);
                    }
                }
                None => {
                    let inv = field.inv(&coef);
                    scale(field, &mut v, &inv);
                    if self.track {
                        scale(field, &mut combo, &inv);
                        combo.sort_unstable_by_key(|e| e.0);
                    }
                    for (_, x) in &v {
                        field.check(x)?;
                    }
                    self.pivots[lead as usize] = Some(Pivot { vec: v, combo });
                    self.rank += 1;
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Reduces `v`; returns the remainder and, when tracking, coefficients `c`
    /// with `v = sum c_k * input_k + remainder`.
    pub fn solve(&self, mut v: SparseVec<F::Elem>) -> Result<(SparseVec<F::Elem>, SparseVec<F::Elem>)> {
        let field = self.field;
        let mut coeffs: SparseVec<F::Elem> = Vec::new();
        let mut rem: SparseVec<F::Elem> = Vec::new();
        while let Some((lead, coef)) = v.first().cloned() {
            match &self.pivots[lead as usize] {
                Some(p) => {
                    v = sub_scaled(field, &v, &coef, &p.vec);
                    if self.track {
                        coeffs = add_scaled(field, &coeffs, &coef, &p.combo);
                    }
                    for (_, x) in &v {
                        field.check(x)?;
                    }
                }
                None => {
                    // leading coordinate has no pivot: it survives in the remainder
                    rem.push(v.remove(0));
                }
            }
        }
        Ok((rem, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::super::field::PrimeField;
    use super::*;

    #[test]
    fn merge_cancels() {
        let f = PrimeField::new(7);
        let v = vec![(0, 1), (2, 3)];
        let w = vec![(0, 1), (1, 1), (2, 3)];
        assert_eq!(sub_scaled(&f, &v, &1, &w), vec![(1, 6)]);
    }

    #[test]
    fn tracked_solve_reconstructs() {
        let f = PrimeField::new(101);
        let mut e = Echelon::new(&f, 3, true);
        assert!(e.insert(vec![(0, 1), (1, 2)], 0).unwrap());
        assert!(e.insert(vec![(0, 1), (2, 1)], 1).unwrap());
        assert!(!e.insert(vec![(1, 2), (2, 100)], 2).unwrap());
        let (rem, c) = e.solve(vec![(0, 2), (1, 2), (2, 1)]).unwrap();
        assert!(rem.is_empty());
        // 2e0+2e1+e2 = 1*(e0+2e1) + 1*(e0+e2)
        assert_eq!(c, vec![(0, 1), (1, 1)]);
    }
}
