//! Odd form ideals, relative form parameters, and congruence-subgroup membership.

use crate::error::{OdduError, Result};
use crate::group::{comm, is_unitary, UElem};
use crate::heisenberg::{all_vectors, HElem};
use crate::quadratic::{Idx, OddQuadSpace};
use crate::ring::{Ideal, RingElem};
use crate::transvections::{gen_mat, ElemGen};
use serde::Serialize;
use std::collections::{BTreeSet, VecDeque};

/// (I, 𝔐₀) with 𝔐_min(I) ⊆ 𝔐₀ ⊆ 𝔐_max(I).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddFormIdeal {
    pub ideal: Ideal,
    pub m0: BTreeSet<HElem>,
}

impl OddFormIdeal {
    pub fn new(s: &OddQuadSpace, ideal: Ideal, m0: BTreeSet<HElem>) -> Result<Self> {
        let j = OddFormIdeal { ideal, m0 };
        if !j.is_valid(s) {
            return Err(OdduError::Config("not a relative odd form parameter of the given level".into()));
        }
        Ok(j)
    }

    pub fn min(s: &OddQuadSpace, ideal: Ideal) -> Self {
        OddFormIdeal { ideal, m0: mmin(s, ideal) }
    }

    pub fn max(s: &OddQuadSpace, ideal: Ideal) -> Self {
        OddFormIdeal { ideal, m0: mmax(s, ideal) }
    }

    /// 𝔐_min ⊆ 𝔐₀ ⊆ 𝔐_max, closed under ∔, ⊖ and ⇀.
    pub fn is_valid(&self, s: &OddQuadSpace) -> bool {
        let h = s.v0();
        if !mmin(s, self.ideal).is_subset(&self.m0) || !self.m0.is_subset(&mmax(s, self.ideal)) {
            return false;
        }
        self.m0.iter().all(|a| {
            self.m0.contains(&h.hneg(a))
                && s.ring().elements().all(|y| self.m0.contains(&h.haction(a, y)))
                && self.m0.iter().all(|b| self.m0.contains(&h.hplus(a, b)))
        })
    }

    pub fn is_elementary(&self, s: &OddQuadSpace, g: &ElemGen) -> bool {
        match g {
            ElemGen::Short { x, .. } => self.ideal.contains(*x),
            ElemGen::Extra { p, .. } => self.m0.contains(p),
            ElemGen::Perm { .. } => self.ideal.contains(1 % s.ring().modulus()),
        }
    }

    /// Every 𝔍₀-elementary transvection.
    pub fn elementary_transvections(&self, s: &OddQuadSpace) -> Vec<ElemGen> {
        let mut out = Vec::new();
        let th = s.theta();
        for &i in &th {
            for &j in &th {
                if j != i && j != -i {
                    for x in self.ideal.elements(s.ring()) {
                        out.push(ElemGen::short(i, j, x));
                    }
                }
            }
            for p in &self.m0 {
                out.push(ElemGen::extra(i, p.clone()));
            }
        }
        out
    }
}

/// 𝔏₀ ⇀ I ∔ {(0, x + bar x) : x ∈ I}, closed.
pub fn mmin(s: &OddQuadSpace, ideal: Ideal) -> BTreeSet<HElem> {
    let r = s.ring();
    let h = s.v0();
    let els = ideal.elements(r);
    let mut seeds: Vec<HElem> = els.iter().map(|&x| HElem::new(vec![0; s.rank()], r.trace_sym(x))).collect();
    // a ⇀ y for y ∈ I is reached from a ⇀ d with d the generator of I
    let d = ideal.generator() % r.modulus();
    seeds.extend(s.l0().elements().iter().map(|a| h.haction(a, d)));
    h.close_subgroup(seeds)
}

/// {(v,x) ∈ 𝔏₀ : x ∈ I, B₀(v,w) ∈ I for all w ∈ V₀^ev}.
pub fn mmax(s: &OddQuadSpace, ideal: Ideal) -> BTreeSet<HElem> {
    mmax_over(s, ideal, s.even_part())
}

/// The variant quantifying over all of V₀ rather than V₀^ev. Kept only to compare the two
/// definitions on examples.
pub fn mmax_uncorrected(s: &OddQuadSpace, ideal: Ideal) -> BTreeSet<HElem> {
    mmax_over(s, ideal, &all_vectors(s.ring().modulus(), s.rank()))
}

fn mmax_over(s: &OddQuadSpace, ideal: Ideal, ws: &[Vec<RingElem>]) -> BTreeSet<HElem> {
    s.l0()
        .elements()
        .iter()
        .filter(|a| ideal.contains(a.x) && ws.iter().all(|w| ideal.contains(s.v0().b(&a.v, w))))
        .cloned()
        .collect()
}

/// Smallest relative form parameter of level I containing `seeds`; errors when the closure
/// leaves 𝔐_max(I).
pub fn close_relative(s: &OddQuadSpace, ideal: Ideal, seeds: &[HElem]) -> Result<OddFormIdeal> {
    let h = s.v0();
    let base = mmin(s, ideal);
    let all = h.close_subgroup(base.into_iter().chain(seeds.iter().cloned()));
    let max = mmax(s, ideal);
    if let Some(a) = all.iter().find(|a| !max.contains(a)) {
        return Err(OdduError::PayloadNotInFormParameter { v: a.v.clone(), x: a.x });
    }
    Ok(OddFormIdeal { ideal, m0: all })
}

/// Heisenberg group of the full space V, used for the lifted parameter 𝔐.
pub type FullElem = (Vec<RingElem>, RingElem);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullFormIdeal {
    pub ideal: Ideal,
    pub m: BTreeSet<FullElem>,
}

/// Largest full Heisenberg group enumerated by `lift_ideal`.
pub const LIFT_LIMIT: f64 = 300_000.0;

fn full_plus(s: &OddQuadSpace, a: &FullElem, b: &FullElem) -> FullElem {
    let r = s.ring();
    let v = a.0.iter().zip(&b.0).map(|(&x, &y)| r.add(x, y)).collect();
    (v, r.add(r.add(a.1, b.1), s.big_b(&a.0, &b.0)))
}

fn full_neg(s: &OddQuadSpace, a: &FullElem) -> FullElem {
    let r = s.ring();
    (a.0.iter().map(|&x| r.neg(x)).collect(), r.add(r.neg(a.1), s.big_b(&a.0, &a.0)))
}

fn full_act(s: &OddQuadSpace, a: &FullElem, y: RingElem) -> FullElem {
    let r = s.ring();
    (a.0.iter().map(|&c| r.mul(c, y)).collect(), r.mul(r.mul(r.mul(r.bar(y), r.bar_one_inv()), a.1), y))
}

/// 𝔐 = 𝔏_h ⇀ I ∔ 𝔐₀ on the full space, by closure.
pub fn lift_ideal(s: &OddQuadSpace, j0: &OddFormIdeal) -> Result<FullFormIdeal> {
    let m = s.ring().modulus() as f64;
    let total = m.powi(s.dim() as i32 + 1);
    if total > LIFT_LIMIT {
        return Err(OdduError::SpaceTooLarge(format!("{total} full Heisenberg elements")));
    }
    let r = s.ring();
    let mut seeds: Vec<FullElem> = Vec::new();
    let d = j0.ideal.generator() % r.modulus();
    for i in s.theta() {
        let v: Vec<RingElem> = s.e(i).iter().map(|&c| r.mul(c, d)).collect();
        seeds.push((v, 0));
    }
    for y in j0.ideal.elements(r) {
        seeds.push((s.zero_vec(), r.trace_sym(y)));
    }
    for a in &j0.m0 {
        seeds.push((s.from_v0(&a.v), a.x));
    }
    let mut gens: Vec<FullElem> = Vec::new();
    for g in &seeds {
        for y in r.elements() {
            gens.push(full_act(s, g, y));
        }
    }
    gens.sort();
    gens.dedup();
    let zero = (s.zero_vec(), 0);
    let mut set = BTreeSet::new();
    set.insert(zero.clone());
    let mut q = VecDeque::from([zero]);
    while let Some(a) = q.pop_front() {
        for g in &gens {
            let b = full_plus(s, &a, g);
            if set.insert(b.clone()) {
                q.push_back(b);
            }
        }
    }
    // finite group: closure under ∔ with the generators already contains inverses
    debug_assert!(set.iter().all(|a| set.contains(&full_neg(s, a))));
    Ok(FullFormIdeal { ideal: j0.ideal, m: set })
}

/// 𝔐₀ = {Q⁰(v) ∔ (0,x) : (v,x) ∈ 𝔐}.
pub fn restrict_ideal(s: &OddQuadSpace, full: &FullFormIdeal) -> OddFormIdeal {
    let r = s.ring();
    let m0 = full
        .m
        .iter()
        .map(|(v, x)| HElem::new(s.v0_part(v).to_vec(), r.sub(*x, s.f_h(v, v))))
        .collect();
    OddFormIdeal { ideal: full.ideal, m0 }
}

/// Numbered conditions of the principal-congruence criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PrincipalCondition {
    HyperbolicBlock,
    BasisImages,
    EvenPart,
}

impl PrincipalCondition {
    pub fn label(&self) -> &'static str {
        match self {
            PrincipalCondition::HyperbolicBlock => "(i)",
            PrincipalCondition::BasisImages => "(ii)",
            PrincipalCondition::EvenPart => "(iii)",
        }
    }
}

fn require_unitary(s: &OddQuadSpace, sigma: &UElem) -> Result<()> {
    if !is_unitary(s, sigma)? {
        return Err(OdduError::NotUnitary);
    }
    Ok(())
}

/// First failing condition for σ ∈ U(𝔍₀), None when σ is a member.
pub fn principal_failure(s: &OddQuadSpace, sigma: &UElem, j0: &OddFormIdeal) -> Result<Option<PrincipalCondition>> {
    require_unitary(s, sigma)?;
    Ok(principal_failure_unchecked(s, sigma, j0))
}

pub fn principal_failure_unchecked(s: &OddQuadSpace, sigma: &UElem, j0: &OddFormIdeal) -> Option<PrincipalCondition> {
    let r = s.ring();
    let th = s.theta();
    for &i in &th {
        for &j in &th {
            let want = u64::from(i == j);
            if !j0.ideal.contains(r.sub(sigma.entry(s, i, j), want)) {
                return Some(PrincipalCondition::HyperbolicBlock);
            }
        }
    }
    for &i in &th {
        if !j0.m0.contains(&s.q0(&sigma.col(s, i))) {
            return Some(PrincipalCondition::BasisImages);
        }
    }
    for v0 in s.even_part() {
        let img = sigma.apply(s, &s.from_v0(v0));
        let d = s.v0().hminus(&s.q0(&img), &HElem::new(v0.clone(), 0));
        if !j0.m0.contains(&d) {
            return Some(PrincipalCondition::EvenPart);
        }
    }
    None
}

pub fn in_principal(s: &OddQuadSpace, sigma: &UElem, j0: &OddFormIdeal) -> Result<bool> {
    Ok(principal_failure(s, sigma, j0)?.is_none())
}

/// Membership straight from the definition: Q(σv) ⊖ Q(v) ∈ 𝔐 for every v ∈ V^ev, with 𝔐
/// the lifted parameter. Tiny sizes only.
pub fn in_principal_by_definition(s: &OddQuadSpace, sigma: &UElem, full: &FullFormIdeal) -> Result<bool> {
    require_unitary(s, sigma)?;
    let evens: BTreeSet<&Vec<RingElem>> = s.even_part().iter().collect();
    for v in all_vectors(s.ring().modulus(), s.dim()) {
        if !evens.contains(&s.v0_part(&v).to_vec()) {
            continue;
        }
        let sv = sigma.apply(s, &v);
        if !full.m.contains(&s.q_diff(&sv, &v)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// ^σ𝔍₀: the restriction to V₀ of ^σ𝔐 = {(σv,x) : (v,x) ∈ 𝔐}, 𝔐 the lift of 𝔐₀.
pub fn act_ideal(s: &OddQuadSpace, sigma: &UElem, j0: &OddFormIdeal) -> Result<OddFormIdeal> {
    require_unitary(s, sigma)?;
    Ok(act_ideal_unchecked(s, sigma, j0))
}

pub fn act_ideal_unchecked(s: &OddQuadSpace, sigma: &UElem, j0: &OddFormIdeal) -> OddFormIdeal {
    let r = s.ring();
    let d = j0.ideal.generator() % r.modulus();
    // generators of 𝔐: (e_i·d, 0) and the embedded 𝔐₀
    let mut gens: Vec<(Vec<RingElem>, RingElem)> =
        s.theta().iter().map(|&i| (s.e(i).iter().map(|&c| r.mul(c, d)).collect(), 0)).collect();
    gens.extend(j0.m0.iter().map(|a| (s.from_v0(&a.v), a.x)));
    let images: Vec<Vec<RingElem>> = gens.iter().map(|(v, _)| sigma.apply(s, v)).collect();
    // restriction (v,x) ↦ (v₀, x − F_h(v,v)) is additive up to (0, −tr F_h(w,v)); those
    // central terms are differences of image elements, so they belong to the image
    let mut seeds: Vec<HElem> = gens
        .iter()
        .zip(&images)
        .map(|((_, x), sv)| HElem::new(s.v0_part(sv).to_vec(), r.sub(*x, s.f_h(sv, sv))))
        .collect();
    let mut vecs: Vec<&Vec<RingElem>> = images.iter().collect();
    vecs.sort();
    vecs.dedup();
    let mut traces = BTreeSet::new();
    for a in &vecs {
        for b in &vecs {
            traces.insert(r.trace_sym(s.f_h(a, b)));
        }
    }
    seeds.extend(traces.into_iter().map(|t| HElem::new(vec![0; s.rank()], t)));
    OddFormIdeal { ideal: j0.ideal, m0: s.v0().close_subgroup(seeds) }
}

pub fn in_normalizer(s: &OddQuadSpace, sigma: &UElem, j0: &OddFormIdeal) -> Result<bool> {
    Ok(act_ideal(s, sigma, j0)?.m0 == j0.m0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CuCondition {
    OffDiagonal,
    DiagonalDifference,
    ZeroColumn,
    ZeroRow,
    V0Block,
}

impl CuCondition {
    pub fn label(&self) -> &'static str {
        match self {
            CuCondition::OffDiagonal => "(i)",
            CuCondition::DiagonalDifference => "(ii)",
            CuCondition::ZeroColumn => "(iii)",
            CuCondition::ZeroRow => "(iv)",
            CuCondition::V0Block => "(v)",
        }
    }
}

/// First failing condition of the CU(I, 𝔐_max) criterion, quantifying over all of V₀^ev.
pub fn cu_max_failure(s: &OddQuadSpace, sigma: &UElem, ideal: Ideal) -> Result<Option<CuCondition>> {
    require_unitary(s, sigma)?;
    Ok(cu_max_failure_unchecked(s, sigma, ideal))
}

pub fn cu_max_failure_unchecked(s: &OddQuadSpace, sigma: &UElem, ideal: Ideal) -> Option<CuCondition> {
    let r = s.ring();
    let h = s.v0();
    let th = s.theta();
    let ev = s.even_part();
    let e = |i: Idx, j: Idx| sigma.entry(s, i, j);
    for &i in &th {
        for &j in &th {
            if i != j && !ideal.contains(e(i, j)) {
                return Some(CuCondition::OffDiagonal);
            }
        }
    }
    for &i in &th {
        for &j in &th {
            if i != j && !ideal.contains(r.sub(e(i, i), e(j, j))) {
                return Some(CuCondition::DiagonalDifference);
            }
        }
    }
    for v0 in ev {
        for &i in &th {
            if !ideal.contains(sigma.oh(s, v0, i)) {
                return Some(CuCondition::ZeroColumn);
            }
        }
    }
    for v0 in ev {
        for &i in &th {
            if !ideal.contains(h.b(&sigma.h0(s, i), v0)) {
                return Some(CuCondition::ZeroRow);
            }
        }
    }
    for v0 in ev {
        let sv = sigma.oo(s, v0);
        for &i in &th {
            let d: Vec<RingElem> = sv.iter().zip(v0).map(|(&a, &b)| r.sub(a, r.mul(b, e(i, i)))).collect();
            for w0 in ev {
                if !ideal.contains(h.b(&d, w0)) {
                    return Some(CuCondition::V0Block);
                }
            }
        }
    }
    None
}

pub fn in_cu_max(s: &OddQuadSpace, sigma: &UElem, ideal: Ideal) -> Result<bool> {
    Ok(cu_max_failure(s, sigma, ideal)?.is_none())
}

/// The four-condition test for membership in U(I, 𝔐_max), written independently of the
/// general criterion.
pub fn in_principal_max_by_conditions(s: &OddQuadSpace, sigma: &UElem, ideal: Ideal) -> Result<bool> {
    require_unitary(s, sigma)?;
    let r = s.ring();
    let h = s.v0();
    let th = s.theta();
    let ev = s.even_part();
    let hh = th.iter().all(|&i| th.iter().all(|&j| ideal.contains(r.sub(sigma.entry(s, i, j), u64::from(i == j)))));
    let col = ev.iter().all(|v0| th.iter().all(|&i| ideal.contains(sigma.oh(s, v0, i))));
    let row = ev.iter().all(|v0| th.iter().all(|&i| ideal.contains(h.b(&sigma.h0(s, i), v0))));
    let blk = ev.iter().all(|v0| {
        let d: Vec<RingElem> = sigma.oo(s, v0).iter().zip(v0).map(|(&a, &b)| r.sub(a, b)).collect();
        ev.iter().all(|w0| ideal.contains(h.b(&d, w0)))
    });
    Ok(hh && col && row && blk)
}

/// The elementary generators quantified over by the full congruence test: T_ij(1) and
/// T_i(ξ) for every ξ ∈ 𝔏₀.
pub fn elementary_generators(s: &OddQuadSpace) -> Vec<ElemGen> {
    let th = s.theta();
    let mut out = Vec::new();
    for &i in &th {
        for &j in &th {
            if j != i && j != -i {
                out.push(ElemGen::short(i, j, 1 % s.ring().modulus()));
            }
        }
    }
    for &i in &th {
        for p in s.l0().elements() {
            out.push(ElemGen::extra(i, p.clone()));
        }
    }
    out
}

/// σ ∈ CU(𝔍₀): σ normalizes and [σ,τ] ∈ U(𝔍₀) for the elementary generators τ.
pub fn in_full_congruence(s: &OddQuadSpace, sigma: &UElem, j0: &OddFormIdeal) -> Result<bool> {
    if !in_normalizer(s, sigma, j0)? {
        return Ok(false);
    }
    for g in elementary_generators(s) {
        let t = UElem::from_mat_unchecked(gen_mat(s, &g));
        let c = comm(s, sigma, &t)?;
        if principal_failure_unchecked(s, &c, j0).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Hypotheses of the CU criterion beyond normalizer and CU_max membership:
/// Q⁰(σe_i) ∈ 𝔐₀ and Q⁰([σ,τ]e_i) ∈ 𝔐₀ for every elementary generator τ.
pub fn lemcu_hypotheses(s: &OddQuadSpace, sigma: &UElem, j0: &OddFormIdeal) -> Result<bool> {
    require_unitary(s, sigma)?;
    let th = s.theta();
    if !th.iter().all(|&i| j0.m0.contains(&s.q0(&sigma.col(s, i)))) {
        return Ok(false);
    }
    for g in elementary_generators(s) {
        let t = UElem::from_mat_unchecked(gen_mat(s, &g));
        let c = comm(s, sigma, &t)?;
        if !th.iter().all(|&i| j0.m0.contains(&s.q0(&c.col(s, i)))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An extra-short witness T₋₁(ξ) with ξ in exactly one of the two parameters, lying in the
/// principal congruence subgroup of that one only. Returns None when the parameters agree.
pub fn separation_witness(s: &OddQuadSpace, a: &OddFormIdeal, b: &OddFormIdeal) -> Option<ElemGen> {
    let pick = |p: &OddFormIdeal, q: &OddFormIdeal| {
        p.m0.iter().filter(|xi| !q.m0.contains(xi)).find_map(|xi| {
            let g = ElemGen::extra(-1, xi.clone());
            let t = UElem::from_mat_unchecked(gen_mat(s, &g));
            let in_p = principal_failure_unchecked(s, &t, p).is_none();
            let in_q = principal_failure_unchecked(s, &t, q).is_none();
            (in_p && !in_q).then_some(g)
        })
    };
    pick(a, b).or_else(|| pick(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{conj, random_unitary};
    use crate::heisenberg::{lmin, AHSpace};
    use crate::ring::PseudoRing;

    fn space(m: u64, l: u64, gram: Vec<Vec<i64>>) -> OddQuadSpace {
        OddQuadSpace::with_lmax(3, AHSpace::new(PseudoRing::new(m, l).unwrap(), gram).unwrap()).unwrap()
    }

    #[test]
    fn action_matches_lifted_parameter() {
        for (m, l, gram) in [(4, 1, vec![]), (4, 3, vec![]), (2, 1, vec![vec![0]]), (3, 2, vec![vec![0]])] {
            let s = space(m, l, gram);
            let r = s.ring();
            for ideal in Ideal::all(r) {
                for j0 in [OddFormIdeal::min(&s, ideal), OddFormIdeal::max(&s, ideal)] {
                    let full = lift_ideal(&s, &j0).unwrap();
                    for seed in 0..6 {
                        let sigma = random_unitary(&s, seed, 8);
                        let moved = FullFormIdeal {
                            ideal,
                            m: full.m.iter().map(|(v, x)| (sigma.apply(&s, v), *x)).collect(),
                        };
                        let want = restrict_ideal(&s, &moved);
                        let got = act_ideal(&s, &sigma, &j0).unwrap();
                        assert_eq!(got, want, "Z/{m} λ={l} I={ideal:?} seed {seed}");
                        assert!(got.is_valid(&s));
                    }
                }
            }
        }
    }

    fn t(s: &OddQuadSpace, g: ElemGen) -> UElem {
        UElem::from_mat_unchecked(gen_mat(s, &g))
    }

    #[test]
    fn even_part_examples() {
        let s = space(5, 1, vec![vec![0, 1], vec![-1, 0]]);
        assert_eq!(s.even_part().len(), 25);
        let ring = PseudoRing::new(5, 1).unwrap();
        let v0 = AHSpace::new(ring, vec![vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(OddQuadSpace::new(3, v0.clone(), lmin(&v0)).unwrap().even_part().len(), 1);
    }

    #[test]
    fn mmin_mmax_examples() {
        let s = space(4, 1, vec![]);
        let r = *s.ring();
        let zero = Ideal::zero(&r);
        assert_eq!(mmin(&s, zero), BTreeSet::from([HElem::new(vec![], 0)]));
        let whole = Ideal::whole();
        assert_eq!(&mmax(&s, whole), s.l0().elements());
        assert!(mmin(&s, whole).is_subset(s.l0().elements()));
        let two = Ideal::principal(&r, 2);
        let xs: Vec<u64> = mmin(&s, two).iter().map(|a| a.x).collect();
        assert_eq!(xs, vec![0]);
        let xs: Vec<u64> = mmax(&s, two).iter().map(|a| a.x).collect();
        assert_eq!(xs, vec![0, 2]);
    }

    #[test]
    fn form_ideals_are_valid() {
        for s in [space(4, 1, vec![]), space(8, 3, vec![vec![0, 1], vec![5, 0]])] {
            for i in Ideal::all(s.ring()) {
                assert!(OddFormIdeal::min(&s, i).is_valid(&s));
                assert!(OddFormIdeal::max(&s, i).is_valid(&s));
            }
        }
    }

    #[test]
    fn lift_restrict_roundtrip() {
        let s = space(4, 1, vec![]);
        for i in Ideal::all(s.ring()) {
            for j0 in [OddFormIdeal::min(&s, i), OddFormIdeal::max(&s, i)] {
                let full = lift_ideal(&s, &j0).unwrap();
                assert_eq!(restrict_ideal(&s, &full), j0);
            }
        }
        let whole = OddFormIdeal::max(&s, Ideal::whole());
        let full = lift_ideal(&s, &whole).unwrap();
        assert_eq!(full.m, s.materialize_big_l(1 << 20).unwrap());
    }

    #[test]
    fn principal_examples() {
        let s = space(4, 1, vec![]);
        let r = *s.ring();
        let j0 = OddFormIdeal::min(&s, Ideal::principal(&r, 2));
        assert!(in_principal(&s, &UElem::identity(&s), &j0).unwrap());
        assert!(in_principal(&s, &t(&s, ElemGen::short(1, 2, 2)), &j0).unwrap());
        assert_eq!(
            principal_failure(&s, &t(&s, ElemGen::short(1, 2, 1)), &j0).unwrap(),
            Some(PrincipalCondition::HyperbolicBlock)
        );
        let bad = UElem::from_mat_unchecked({
            let mut m = crate::matrix::Mat::identity(6);
            m.set(0, 1, 1);
            m
        });
        assert_eq!(in_principal(&s, &bad, &j0), Err(OdduError::NotUnitary));
    }

    #[test]
    fn principal_matches_definition_at_tiny_sizes() {
        let ring = PseudoRing::new(2, 1).unwrap();
        let v0 = AHSpace::new(ring, vec![vec![0]]).unwrap();
        let s = OddQuadSpace::with_lmax(3, v0).unwrap();
        for i in Ideal::all(s.ring()) {
            for j0 in [OddFormIdeal::min(&s, i), OddFormIdeal::max(&s, i)] {
                let full = lift_ideal(&s, &j0).unwrap();
                for seed in 0..40 {
                    let sigma = random_unitary(&s, seed, 1 + seed as usize % 6);
                    assert_eq!(
                        in_principal(&s, &sigma, &j0).unwrap(),
                        in_principal_by_definition(&s, &sigma, &full).unwrap(),
                        "seed {seed}"
                    );
                }
            }
        }
    }

    #[test]
    fn action_and_normalizer() {
        let s = space(8, 3, vec![vec![0, 1], vec![5, 0]]);
        let j0 = OddFormIdeal::min(&s, Ideal::principal(s.ring(), 2));
        assert_eq!(act_ideal(&s, &UElem::identity(&s), &j0).unwrap(), j0);
        for g in [ElemGen::short(1, 2, 3), ElemGen::extra(-2, s.l0().elements().iter().nth(7).unwrap().clone())] {
            assert!(in_normalizer(&s, &t(&s, g), &j0).unwrap());
        }
        for seed in 0..10 {
            let a = random_unitary(&s, seed, 10);
            let b = random_unitary(&s, seed + 100, 10);
            let ab = crate::group::mul(&s, &a, &b);
            let lhs = act_ideal(&s, &ab, &j0).unwrap();
            let rhs = act_ideal(&s, &a, &act_ideal(&s, &b, &j0).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cu_max_examples() {
        let s = space(4, 1, vec![]);
        let two = Ideal::principal(s.ring(), 2);
        assert!(in_cu_max(&s, &UElem::identity(&s), two).unwrap());
        assert!(!in_cu_max(&s, &t(&s, ElemGen::short(1, 2, 1)), two).unwrap());
        let s5 = space(5, 1, vec![]);
        let d = crate::group::hyperbolic_diag(&s5, 1, 1).unwrap();
        assert!(in_cu_max(&s5, &d, Ideal::zero(s5.ring())).unwrap());
        let s8 = space(8, 3, vec![]);
        let d = crate::group::hyperbolic_diag(&s8, 2, 5).unwrap();
        assert!(in_cu_max(&s8, &d, Ideal::principal(s8.ring(), 4)).unwrap());
    }

    #[test]
    fn full_congruence_examples() {
        let s = space(4, 1, vec![]);
        let j0 = OddFormIdeal::min(&s, Ideal::principal(s.ring(), 2));
        assert!(in_full_congruence(&s, &UElem::identity(&s), &j0).unwrap());
        assert!(in_full_congruence(&s, &t(&s, ElemGen::short(1, 2, 2)), &j0).unwrap());
        assert!(!in_full_congruence(&s, &t(&s, ElemGen::short(1, 2, 1)), &j0).unwrap());
    }

    #[test]
    fn umax_conditions_agree() {
        let s = space(8, 3, vec![vec![0, 1], vec![5, 0]]);
        for i in Ideal::all(s.ring()) {
            let j0 = OddFormIdeal::max(&s, i);
            for seed in 0..15 {
                let sigma = random_unitary(&s, seed, 6);
                assert_eq!(in_principal(&s, &sigma, &j0).unwrap(), in_principal_max_by_conditions(&s, &sigma, i).unwrap());
            }
            for g in j0.elementary_transvections(&s).into_iter().step_by(13) {
                let sigma = t(&s, g);
                assert!(in_principal_max_by_conditions(&s, &sigma, i).unwrap());
            }
        }
    }

    #[test]
    fn cu_max_matches_full_congruence_with_mmax() {
        let s = space(4, 1, vec![]);
        for i in Ideal::all(s.ring()) {
            let j0 = OddFormIdeal::max(&s, i);
            for seed in 0..20 {
                let sigma = random_unitary(&s, seed, 1 + seed as usize % 4);
                assert_eq!(in_cu_max(&s, &sigma, i).unwrap(), in_full_congruence(&s, &sigma, &j0).unwrap(), "seed {seed}");
            }
        }
    }

    #[test]
    fn lemcu_direction_on_samples() {
        let s = space(4, 1, vec![]);
        for i in Ideal::all(s.ring()) {
            for j0 in [OddFormIdeal::min(&s, i), OddFormIdeal::max(&s, i)] {
                for seed in 0..15 {
                    let sigma = random_unitary(&s, seed, 3);
                    let hyp = in_normalizer(&s, &sigma, &j0).unwrap()
                        && in_cu_max(&s, &sigma, i).unwrap()
                        && lemcu_hypotheses(&s, &sigma, &j0).unwrap();
                    if hyp {
                        assert!(in_full_congruence(&s, &sigma, &j0).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn proptild_on_samples() {
        let s = space(6, 1, vec![vec![0, 1], vec![5, 0]]);
        let j0 = OddFormIdeal::min(&s, Ideal::principal(s.ring(), 3));
        for seed in 0..10 {
            let sigma = random_unitary(&s, seed, 8);
            let tau = random_unitary(&s, seed + 50, 3);
            let moved = act_ideal(&s, &sigma, &j0).unwrap();
            assert_eq!(
                in_principal(&s, &conj(&s, &sigma, &tau).unwrap(), &moved).unwrap(),
                in_principal(&s, &tau, &j0).unwrap()
            );
        }
    }

    #[test]
    fn separation_witnesses() {
        let s = space(8, 3, vec![vec![0, 1], vec![5, 0]]);
        for i in Ideal::all(s.ring()) {
            let a = OddFormIdeal::min(&s, i);
            let b = OddFormIdeal::max(&s, i);
            assert_eq!(separation_witness(&s, &a, &b).is_some(), a != b);
        }
    }

    #[test]
    fn uncorrected_mmax_comparison_runs() {
        // the two definitions may or may not differ; only containment is asserted
        let ring = PseudoRing::new(4, 1).unwrap();
        let v0 = AHSpace::new(ring, vec![vec![2]]).unwrap();
        let s = OddQuadSpace::with_lmax(3, v0).unwrap();
        for i in Ideal::all(s.ring()) {
            assert!(mmax_uncorrected(&s, i).is_subset(&mmax(&s, i)));
        }
    }
}
