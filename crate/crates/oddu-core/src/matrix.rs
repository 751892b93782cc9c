//! Dense square matrices over Z/m with exact inversion.

use crate::error::{OdduError, Result};
use crate::ring::{PseudoRing, RingElem};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat {
    d: usize,
    a: Vec<RingElem>,
}

impl Mat {
    pub fn zero(d: usize) -> Mat {
        Mat { d, a: vec![0; d * d] }
    }

    pub fn identity(d: usize) -> Mat {
        let mut m = Mat::zero(d);
        for i in 0..d {
            m.a[i * d + i] = 1;
        }
        m
    }

    pub fn from_rows(ring: &PseudoRing, rows: &[Vec<i64>]) -> Result<Mat> {
        let d = rows.len();
        let mut m = Mat::zero(d);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(OdduError::DimensionMismatch { expected: d, got: row.len() });
            }
            for (j, &e) in row.iter().enumerate() {
                m.a[i * d + j] = ring.reduce(e);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> Vec<Vec<RingElem>> {
        self.a.chunks(self.d).map(|c| c.to_vec()).collect()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> RingElem {
        self.a[r * self.d + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: RingElem) {
        self.a[r * self.d + c] = v;
    }

    pub fn is_identity(&self) -> bool {
        (0..self.d).all(|r| (0..self.d).all(|c| self.get(r, c) == u64::from(r == c)))
    }

    pub fn column(&self, c: usize) -> Vec<RingElem> {
        (0..self.d).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.d);
        for r in 0..self.d {
            for c in 0..self.d {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, ring: &PseudoRing, other: &Mat) -> Mat {
        let d = self.d;
        let m = ring.modulus();
        let mut out = Mat::zero(d);
        for r in 0..d {
            let row = &self.a[r * d..(r + 1) * d];
            let orow = &mut out.a[r * d..(r + 1) * d];
            for (k, &x) in row.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let brow = &other.a[k * d..(k + 1) * d];
                for (o, &y) in orow.iter_mut().zip(brow) {
                    *o = (*o + x * y) % m;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, ring: &PseudoRing, v: &[RingElem]) -> Vec<RingElem> {
        (0..self.d)
            .map(|r| {
                (0..self.d).fold(0, |acc, c| ring.add(acc, ring.mul(self.get(r, c), v[c])))
            })
            .collect()
    }

    /// Exact inverse over Z/m by Euclidean row reduction. Works for composite m, where a
    /// column of an invertible matrix need not contain a unit entry until rows are combined.
    pub fn inverse(&self, ring: &PseudoRing) -> Result<Mat> {
        let d = self.d;
        let m = ring.modulus() as i64;
        let w = 2 * d;
        let mut aug: Vec<i64> = vec![0; d * w];
        for r in 0..d {
            for c in 0..d {
                aug[r * w + c] = self.get(r, c) as i64;
            }
            aug[r * w + d + r] = 1;
        }
        for col in 0..d {
            // Euclid on rows col..d until only row `col` is nonzero in this column
            loop {
                let mut best: Option<usize> = None;
                for r in col..d {
                    let v = aug[r * w + col];
                    if v != 0 && best.is_none_or(|b| v < aug[b * w + col]) {
                        best = Some(r);
                    }
                }
                let Some(p) = best else { return Err(OdduError::NotInvertible) };
                if p != col {
                    for c in 0..w {
                        aug.swap(p * w + c, col * w + c);
                    }
                }
                let pv = aug[col * w + col];
                let mut done = true;
                for r in col + 1..d {
                    let v = aug[r * w + col];
                    if v != 0 {
                        let q = v / pv;
                        for c in 0..w {
                            aug[r * w + c] = (aug[r * w + c] - q * aug[col * w + c]).rem_euclid(m);
                        }
                        if aug[r * w + col] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            let pv = aug[col * w + col] as u64;
            let inv = ring.inv(pv).map_err(|_| OdduError::NotInvertible)? as i64;
            for c in 0..w {
                aug[col * w + c] = (aug[col * w + c] * inv).rem_euclid(m);
            }
            for r in 0..d {
                if r != col {
                    let f = aug[r * w + col];
                    if f != 0 {
                        for c in 0..w {
                            aug[r * w + c] = (aug[r * w + c] - f * aug[col * w + c]).rem_euclid(m);
                        }
                    }
                }
            }
        }
        let mut out = Mat::zero(d);
        for r in 0..d {
            for c in 0..d {
                out.set(r, c, aug[r * w + d + c] as u64);
            }
        }
        Ok(out)
    }

    /// Left multiplication by (I + N) for sparse N given as (row, col, value) triples.
    pub fn left_apply(&mut self, ring: &PseudoRing, delta: &[(usize, usize, RingElem)]) {
        let d = self.d;
        let m = ring.modulus();
        let mut updates: Vec<(usize, Vec<RingElem>)> = Vec::with_capacity(delta.len());
        for &(r, c, v) in delta {
            let src = &self.a[c * d..(c + 1) * d];
            let add: Vec<RingElem> = src.iter().map(|&x| (x * v) % m).collect();
            updates.push((r, add));
        }
        for (r, add) in updates {
            for (o, x) in self.a[r * d..(r + 1) * d].iter_mut().zip(add) {
                *o = (*o + x) % m;
            }
        }
    }

    /// Right multiplication by (I + N) for sparse N.
    pub fn right_apply(&mut self, ring: &PseudoRing, delta: &[(usize, usize, RingElem)]) {
        let d = self.d;
        let m = ring.modulus();
        let mut updates: Vec<(usize, Vec<RingElem>)> = Vec::with_capacity(delta.len());
        for &(r, c, v) in delta {
            // column c gains v · (column r)
            let add: Vec<RingElem> = (0..d).map(|i| (self.a[i * d + r] * v) % m).collect();
            updates.push((c, add));
        }
        for (c, add) in updates {
            for (i, x) in add.into_iter().enumerate() {
                let o = &mut self.a[i * d + c];
                *o = (*o + x) % m;
            }
        }
    }

    /// Off-identity entries: the sparse N with self = I + N.
    pub fn delta(&self, ring: &PseudoRing) -> Vec<(usize, usize, RingElem)> {
        let mut out = Vec::new();
        for r in 0..self.d {
            for c in 0..self.d {
                let v = self.get(r, c);
                let target = if r == c { ring.sub(v, 1) } else { v };
                if target != 0 {
                    out.push((r, c, target));
                }
            }
        }
        out
    }

    pub fn from_delta(ring: &PseudoRing, d: usize, delta: &[(usize, usize, RingElem)]) -> Mat {
        let mut m = Mat::identity(d);
        for &(r, c, v) in delta {
            let cur = m.get(r, c);
            m.set(r, c, ring.add(cur, v));
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inverse_without_unit_entries() {
        // det = -5 ≡ 1 mod 6, but no entry is a unit
        let r = PseudoRing::new(6, 1).unwrap();
        let m = Mat::from_rows(&r, &[vec![2, 3], vec![3, 2]]).unwrap();
        let inv = m.inverse(&r).unwrap();
        assert!(m.mul(&r, &inv).is_identity());
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let r = PseudoRing::new(6, 1).unwrap();
        let m = Mat::from_rows(&r, &[vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(m.inverse(&r), Err(OdduError::NotInvertible));
    }

    proptest! {
        #[test]
        fn inverse_agrees_with_product(entries in proptest::collection::vec(0i64..12, 16)) {
            let r = PseudoRing::new(12, 1).unwrap();
            let rows: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            let m = Mat::from_rows(&r, &rows).unwrap();
            if let Ok(inv) = m.inverse(&r) {
                prop_assert!(m.mul(&r, &inv).is_identity());
                prop_assert!(inv.mul(&r, &m).is_identity());
            }
        }

        #[test]
        fn sparse_application_matches_dense(entries in proptest::collection::vec(0i64..8, 16), a in 0usize..4, b in 0usize..4, v in 1u64..8) {
            let r = PseudoRing::new(8, 3).unwrap();
            let rows: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            let m = Mat::from_rows(&r, &rows).unwrap();
            let delta = vec![(a, b, v), (b, (a + 1) % 4, 3)];
            let g = Mat::from_delta(&r, 4, &delta);
            let mut left = m.clone();
            left.left_apply(&r, &delta);
            prop_assert_eq!(left, g.mul(&r, &m));
            let mut right = m.clone();
            right.right_apply(&r, &delta);
            prop_assert_eq!(right, m.mul(&r, &g));
        }
    }
}
