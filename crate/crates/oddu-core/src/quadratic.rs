//! The hyperbolic odd quadratic space Hⁿ ⊥ V₀ with Θ-indexed basis.
//!
//! Basis order is e₁,…,e_n, e₋ₙ,…,e₋₁, f₁,…,f_r. Θ indices are signed integers.

use crate::error::{OdduError, Result};
use crate::heisenberg::{all_vectors, is_form_parameter, lmax, AHSpace, FormParameter, HElem};
use crate::matrix::Mat;
use crate::ring::{PseudoRing, RingElem};
use std::collections::BTreeSet;

/// A Θ index: 1..=n or -n..=-1.
pub type Idx = i32;

#[derive(Clone, Debug)]
pub struct OddQuadSpace {
    ring: PseudoRing,
    n: usize,
    v0: AHSpace,
    l0: FormParameter,
    gram: Mat,
    even: Vec<Vec<RingElem>>,
}

impl OddQuadSpace {
    pub fn new(n: usize, v0: AHSpace, l0: FormParameter) -> Result<Self> {
        if n == 0 {
            return Err(OdduError::Config("hyperbolic rank n must be at least 1".into()));
        }
        if l0.len() <= 4096 && !is_form_parameter(&v0, l0.elements()) {
            return Err(OdduError::Config("V0 form parameter is not an odd form parameter".into()));
        }
        let ring = *v0.ring();
        let r = v0.rank();
        let d = 2 * n + r;
        let mut gram = Mat::zero(d);
        for i in 1..=n {
            let (p, q) = (i - 1, 2 * n - i);
            gram.set(p, q, 1);
            gram.set(q, p, ring.neg(ring.bar(1)));
        }
        for a in 0..r {
            for b in 0..r {
                gram.set(2 * n + a, 2 * n + b, v0.gram()[a][b]);
            }
        }
        let even: BTreeSet<Vec<RingElem>> = l0.elements().iter().map(|a| a.v.clone()).collect();
        Ok(OddQuadSpace { ring, n, v0, l0, gram, even: even.into_iter().collect() })
    }

    /// Space with 𝔏₀ = L_max.
    pub fn with_lmax(n: usize, v0: AHSpace) -> Result<Self> {
        let l0 = lmax(&v0);
        Self::new(n, v0, l0)
    }

    pub fn ring(&self) -> &PseudoRing {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.v0.rank()
    }

    pub fn dim(&self) -> usize {
        2 * self.n + self.v0.rank()
    }

    pub fn v0(&self) -> &AHSpace {
        &self.v0
    }

    pub fn l0(&self) -> &FormParameter {
        &self.l0
    }

    /// Gram matrix of B on the full canonical basis.
    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    /// Θ in the order 1 < … < n < −n < … < −1.
    pub fn theta(&self) -> Vec<Idx> {
        let n = self.n as Idx;
        (1..=n).chain((-n..=-1).map(|i| i)).collect()
    }

    pub fn is_index(&self, i: Idx) -> bool {
        i != 0 && i.unsigned_abs() as usize <= self.n
    }

    #[inline]
    pub fn pos(&self, i: Idx) -> usize {
        debug_assert!(self.is_index(i));
        if i > 0 {
            i as usize - 1
        } else {
            (2 * self.n as Idx + i) as usize
        }
    }

    /// Position of the V₀ basis vector f_k (k counted from 0).
    #[inline]
    pub fn pos0(&self, k: usize) -> usize {
        2 * self.n + k
    }

    /// ε_i = inv(bar 1) for i > 0 and −1 for i < 0.
    pub fn eps(&self, i: Idx) -> RingElem {
        if i > 0 {
            self.ring.bar_one_inv()
        } else {
            self.ring.neg(1)
        }
    }

    pub fn zero_vec(&self) -> Vec<RingElem> {
        vec![0; self.dim()]
    }

    pub fn e(&self, i: Idx) -> Vec<RingElem> {
        let mut v = self.zero_vec();
        v[self.pos(i)] = 1;
        v
    }

    pub fn f(&self, k: usize) -> Vec<RingElem> {
        let mut v = self.zero_vec();
        v[self.pos0(k)] = 1;
        v
    }

    /// Embeds a V₀ vector.
    pub fn from_v0(&self, v0: &[RingElem]) -> Vec<RingElem> {
        let mut v = self.zero_vec();
        v[2 * self.n..].copy_from_slice(v0);
        v
    }

    pub fn coord(&self, v: &[RingElem], i: Idx) -> RingElem {
        v[self.pos(i)]
    }

    pub fn v0_part<'a>(&self, v: &'a [RingElem]) -> &'a [RingElem] {
        &v[2 * self.n..]
    }

    /// F_h(v,w) = Σ_{i∈Θ₊} bar(vᵢ)·inv(bar 1)·w₋ᵢ
    pub fn f_h(&self, v: &[RingElem], w: &[RingElem]) -> RingElem {
        let r = &self.ring;
        (1..=self.n as Idx).fold(0, |acc, i| {
            let t = r.mul(r.mul(r.bar(self.coord(v, i)), r.bar_one_inv()), self.coord(w, -i));
            r.add(acc, t)
        })
    }

    /// B(v,w) = F_h(v,w) − bar(F_h(w,v)) + B₀(v₀,w₀)
    pub fn big_b(&self, v: &[RingElem], w: &[RingElem]) -> RingElem {
        let r = &self.ring;
        let bh = r.sub(self.f_h(v, w), r.bar(self.f_h(w, v)));
        r.add(bh, self.v0.b(self.v0_part(v), self.v0_part(w)))
    }

    /// Q⁰(v) = (v₀, −F_h(v_h, v_h))
    pub fn q0(&self, v: &[RingElem]) -> HElem {
        HElem::new(self.v0_part(v).to_vec(), self.ring.neg(self.f_h(v, v)))
    }

    pub fn in_l0(&self, a: &HElem) -> bool {
        self.l0.contains(a)
    }

    /// (v,x) ∈ 𝔏 iff (v₀, x − F_h(v_h,v_h)) ∈ 𝔏₀.
    pub fn in_big_l(&self, v: &[RingElem], x: RingElem) -> bool {
        let a = HElem::new(self.v0_part(v).to_vec(), self.ring.sub(x, self.f_h(v, v)));
        self.in_l0(&a)
    }

    /// Membership straight from 𝔏 = 𝔏_h + 𝔏₀ with 𝔏_h = {(v_h, F_h(v_h,v_h) + y + bar y)}.
    /// Used to cross-validate `in_big_l`.
    pub fn in_big_l_by_definition(&self, v: &[RingElem], x: RingElem) -> bool {
        let r = &self.ring;
        let fh = self.f_h(v, v);
        r.elements().any(|y| {
            let xh = r.add(fh, r.trace_sym(y));
            self.in_l0(&HElem::new(self.v0_part(v).to_vec(), r.sub(x, xh)))
        })
    }

    /// Q(v) ≡ Q(w) mod 𝔏, decided through Q⁰(v) ≡ Q⁰(w) mod 𝔏₀.
    pub fn q_equiv(&self, v: &[RingElem], w: &[RingElem]) -> bool {
        self.in_l0(&self.v0.hminus(&self.q0(v), &self.q0(w)))
    }

    /// Q(v) ⊖ Q(w) = (v − w, B(w − v, w)) in the Heisenberg group of V.
    pub fn q_diff(&self, v: &[RingElem], w: &[RingElem]) -> (Vec<RingElem>, RingElem) {
        let r = &self.ring;
        let diff: Vec<RingElem> = v.iter().zip(w).map(|(&a, &b)| r.sub(a, b)).collect();
        let back: Vec<RingElem> = diff.iter().map(|&a| r.neg(a)).collect();
        let x = self.big_b(&back, w);
        (diff, x)
    }

    pub fn is_isotropic(&self, v: &[RingElem]) -> bool {
        self.in_big_l(v, 0)
    }

    pub fn is_hyperbolic_pair(&self, v: &[RingElem], w: &[RingElem]) -> bool {
        self.is_isotropic(v) && self.is_isotropic(w) && self.big_b(v, w) == 1 % self.ring.modulus()
    }

    /// Every element of 𝔏 on the full space, by the definition. Only for cross-validation
    /// at tiny sizes.
    pub fn materialize_big_l(&self, limit: usize) -> Result<BTreeSet<(Vec<RingElem>, RingElem)>> {
        let total = (self.ring.modulus() as f64).powi(self.dim() as i32 + 1);
        if total > limit as f64 {
            return Err(OdduError::SpaceTooLarge(format!("{total} Heisenberg elements")));
        }
        let mut out = BTreeSet::new();
        for v in all_vectors(self.ring.modulus(), self.dim()) {
            for x in self.ring.elements() {
                if self.in_big_l_by_definition(&v, x) {
                    out.insert((v.clone(), x));
                }
            }
        }
        Ok(out)
    }

    /// V₀^ev = {v₀ : (v₀,x) ∈ 𝔏₀ for some x}, sorted.
    pub fn even_part(&self) -> &[Vec<RingElem>] {
        &self.even
    }

    /// Smallest x with (v₀,x) ∈ 𝔏₀.
    pub fn lift_x(&self, v0: &[RingElem]) -> Option<RingElem> {
        self.ring.elements().find(|&x| self.in_l0(&HElem::new(v0.to_vec(), x)))
    }

    /// A small generating set of V₀^ev as a module, chosen greedily in sorted order.
    pub fn even_generators(&self) -> Vec<Vec<RingElem>> {
        let r = &self.ring;
        let mut span: BTreeSet<Vec<RingElem>> = BTreeSet::new();
        span.insert(vec![0; self.rank()]);
        let mut gens = Vec::new();
        for v in &self.even {
            if span.contains(v) {
                continue;
            }
            gens.push(v.clone());
            let mut work: Vec<Vec<RingElem>> = span.iter().cloned().collect();
            while let Some(a) = work.pop() {
                for g in &gens {
                    for y in r.elements() {
                        let b: Vec<RingElem> = a.iter().zip(g).map(|(&p, &q)| r.add(p, r.mul(q, y))).collect();
                        if span.insert(b.clone()) {
                            work.push(b);
                        }
                    }
                }
            }
        }
        gens
    }
}
