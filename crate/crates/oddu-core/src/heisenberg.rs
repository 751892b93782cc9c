//! Anti-Hermitian spaces, their Heisenberg group, and odd form parameters as explicit sets.

use crate::error::{OdduError, Result};
use crate::ring::{PseudoRing, RingElem};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Free module R^r with an anti-Hermitian Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AHSpace {
    ring: PseudoRing,
    gram: Vec<Vec<RingElem>>,
}

/// Element (v, x) of the Heisenberg group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HElem {
    pub v: Vec<RingElem>,
    pub x: RingElem,
}

impl HElem {
    pub fn new(v: Vec<RingElem>, x: RingElem) -> Self {
        HElem { v, x }
    }

    pub fn zero(rank: usize) -> Self {
        HElem { v: vec![0; rank], x: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.v.iter().all(|&c| c == 0)
    }
}

impl AHSpace {
    pub fn new(ring: PseudoRing, gram: Vec<Vec<i64>>) -> Result<Self> {
        let r = gram.len();
        let mut g = vec![vec![0; r]; r];
        for (i, row) in gram.iter().enumerate() {
            if row.len() != r {
                return Err(OdduError::DimensionMismatch { expected: r, got: row.len() });
            }
            for (j, &e) in row.iter().enumerate() {
                g[i][j] = ring.reduce(e);
            }
        }
        for i in 0..r {
            for j in 0..r {
                if g[i][j] != ring.neg(ring.bar(g[j][i])) {
                    return Err(OdduError::NotAntiHermitian(i, j));
                }
            }
        }
        Ok(AHSpace { ring, gram: g })
    }

    pub fn zero_rank(ring: PseudoRing) -> Self {
        AHSpace { ring, gram: vec![] }
    }

    pub fn ring(&self) -> &PseudoRing {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<RingElem>] {
        &self.gram
    }

    fn check_len(&self, v: &[RingElem]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(OdduError::DimensionMismatch { expected: self.rank(), got: v.len() });
        }
        Ok(())
    }

    /// B(Σ eᵢxᵢ, Σ eⱼyⱼ) = Σ bar(xᵢ)·inv(bar 1)·G[i][j]·yⱼ.
    pub fn b_form(&self, v: &[RingElem], w: &[RingElem]) -> Result<RingElem> {
        self.check_len(v)?;
        self.check_len(w)?;
        Ok(self.b(v, w))
    }

    /// Unchecked variant of `b_form` for internal use.
    pub fn b(&self, v: &[RingElem], w: &[RingElem]) -> RingElem {
        let r = &self.ring;
        let mut acc = 0;
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            let left = r.mul(r.bar(vi), r.bar_one_inv());
            for (j, &wj) in w.iter().enumerate() {
                acc = r.add(acc, r.mul(r.mul(left, self.gram[i][j]), wj));
            }
        }
        acc
    }

    pub fn hplus(&self, a: &HElem, b: &HElem) -> HElem {
        let r = &self.ring;
        let v = a.v.iter().zip(&b.v).map(|(&x, &y)| r.add(x, y)).collect();
        HElem { v, x: r.add(r.add(a.x, b.x), self.b(&a.v, &b.v)) }
    }

    pub fn hneg(&self, a: &HElem) -> HElem {
        let r = &self.ring;
        HElem { v: a.v.iter().map(|&x| r.neg(x)).collect(), x: r.add(r.neg(a.x), self.b(&a.v, &a.v)) }
    }

    /// a ⊖ b := a ∔ (⊖b)
    pub fn hminus(&self, a: &HElem, b: &HElem) -> HElem {
        self.hplus(a, &self.hneg(b))
    }

    /// (v,x) ⇀ y = (vy, bar(y)·inv(bar 1)·x·y)
    pub fn haction(&self, a: &HElem, y: RingElem) -> HElem {
        let r = &self.ring;
        HElem {
            v: a.v.iter().map(|&c| r.mul(c, y)).collect(),
            x: r.mul(r.mul(r.mul(r.bar(y), r.bar_one_inv()), a.x), y),
        }
    }

    /// tr(v,x) = x − bar(x) − B(v,v)
    pub fn trace(&self, a: &HElem) -> RingElem {
        let r = &self.ring;
        r.sub(r.sub(a.x, r.bar(a.x)), self.b(&a.v, &a.v))
    }

    /// All vectors of R^r in lexicographic order.
    pub fn vectors(&self) -> Vec<Vec<RingElem>> {
        all_vectors(self.ring.modulus(), self.rank())
    }

    /// Every element of the Heisenberg group, vector-major.
    pub fn all_elems(&self) -> Vec<HElem> {
        let mut out = Vec::new();
        for v in self.vectors() {
            for x in self.ring.elements() {
                out.push(HElem { v: v.clone(), x });
            }
        }
        out
    }

    /// Smallest ⇀-stable subgroup containing `seeds`. ⇀ is additive over a commutative ring,
    /// so the subgroup generated by the ⇀-orbits of the seeds is already ⇀-stable. Orbit
    /// elements already in the current subgroup are skipped.
    pub fn close_subgroup(&self, seeds: impl IntoIterator<Item = HElem>) -> BTreeSet<HElem> {
        let zero = HElem::zero(self.rank());
        let mut set = BTreeSet::new();
        set.insert(zero);
        let mut gens: Vec<HElem> = Vec::new();
        for s in seeds {
            for y in self.ring.elements() {
                let g = self.haction(&s, y);
                if set.contains(&g) {
                    continue;
                }
                gens.push(g);
                let mut work: Vec<HElem> = set.iter().cloned().collect();
                while let Some(a) = work.pop() {
                    for g in &gens {
                        for b in [self.hplus(&a, g), self.hplus(&a, &self.hneg(g))] {
                            if !set.contains(&b) {
                                set.insert(b.clone());
                                work.push(b);
                            }
                        }
                    }
                }
            }
        }
        set
    }
}

/// All vectors of (Z/m)^r in lexicographic order.
pub fn all_vectors(m: u64, r: usize) -> Vec<Vec<RingElem>> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        let mut next = Vec::with_capacity(out.len() * m as usize);
        for v in &out {
            for c in 0..m {
                let mut w = v.clone();
                w.push(c);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// An odd form parameter, stored as its explicit element set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormParameter {
    elems: BTreeSet<HElem>,
}

impl FormParameter {
    pub fn contains(&self, a: &HElem) -> bool {
        self.elems.contains(a)
    }

    pub fn elements(&self) -> &BTreeSet<HElem> {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Wraps a set without validation; callers vouch for the form-parameter axioms.
    pub fn from_set_unchecked(elems: BTreeSet<HElem>) -> Self {
        FormParameter { elems }
    }
}

/// L_min = {(0, x + bar x)}.
pub fn lmin(s: &AHSpace) -> FormParameter {
    let r = s.ring();
    let elems = r.elements().map(|x| HElem { v: vec![0; s.rank()], x: r.trace_sym(x) }).collect();
    FormParameter { elems }
}

/// L_max = ker tr.
pub fn lmax(s: &AHSpace) -> FormParameter {
    let elems = s.all_elems().into_iter().filter(|a| s.trace(a) == 0).collect();
    FormParameter { elems }
}

/// Smallest odd form parameter containing the generators.
pub fn close_form_parameter(s: &AHSpace, gens: &[HElem]) -> Result<FormParameter> {
    for g in gens {
        if g.v.len() != s.rank() {
            return Err(OdduError::DimensionMismatch { expected: s.rank(), got: g.v.len() });
        }
        if s.trace(g) != 0 {
            return Err(OdduError::GeneratorNotInLmax { v: g.v.clone(), x: g.x });
        }
    }
    let seeds = lmin(s).elems.into_iter().chain(gens.iter().cloned());
    Ok(FormParameter { elems: s.close_subgroup(seeds) })
}

pub fn is_form_parameter(s: &AHSpace, set: &BTreeSet<HElem>) -> bool {
    if !lmin(s).elems.is_subset(set) {
        return false;
    }
    if set.iter().any(|a| s.trace(a) != 0) {
        return false;
    }
    for a in set {
        for b in set {
            if !set.contains(&s.hplus(a, b)) {
                return false;
            }
        }
        if !set.contains(&s.hneg(a)) {
            return false;
        }
        for y in s.ring().elements() {
            if !set.contains(&s.haction(a, y)) {
                return false;
            }
        }
    }
    true
}
