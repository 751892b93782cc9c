//! Words of σ-conjugates for short transvections whose parameter is a matrix entry or a
//! linear combination of entries.

use super::word::ConjWord;
use crate::error::{OdduError, Result};
use crate::matrix::Mat;
use crate::quadratic::{Idx, OddQuadSpace};
use crate::ring::{solve_combination, RingElem};
use crate::transvections::{gen_delta, word_inverse, ElemGen};
use serde::Serialize;
use std::collections::{BTreeMap, VecDeque};

/// σ with its inverse, as seen by the constructions.
#[derive(Clone, Debug)]
pub struct Sig {
    pub m: Mat,
    pub mi: Mat,
}

impl Sig {
    pub fn new(s: &OddQuadSpace, m: Mat) -> Result<Self> {
        let mi = m.inverse(s.ring())?;
        Ok(Sig { m, mi })
    }

    /// σ_ij
    pub fn e(&self, s: &OddQuadSpace, i: Idx, j: Idx) -> RingElem {
        self.m.get(s.pos(i), s.pos(j))
    }

    /// σ̃_ij
    pub fn ti(&self, s: &OddQuadSpace, i: Idx, j: Idx) -> RingElem {
        self.mi.get(s.pos(i), s.pos(j))
    }

    /// ^ε σ for a generator word ε.
    pub fn conj(&self, s: &OddQuadSpace, eps: &[ElemGen]) -> Sig {
        let r = s.ring();
        let mut m = self.m.clone();
        let mut mi = self.mi.clone();
        for g in eps.iter().rev() {
            let d = gen_delta(s, g);
            let di = gen_delta(s, &g.inverse(s));
            m.left_apply(r, &d);
            m.right_apply(r, &di);
            mi.left_apply(r, &d);
            mi.right_apply(r, &di);
        }
        Sig { m, mi }
    }

    pub fn eval(&self, s: &OddQuadSpace, w: &ConjWord) -> Mat {
        w.evaluate_with(s, &self.m, &self.mi)
    }
}

pub(crate) fn require_n3(s: &OddQuadSpace) -> Result<()> {
    if s.n() != 3 {
        return Err(OdduError::WrongRank(s.n()));
    }
    Ok(())
}

/// First index in Θ order different from ± every argument.
pub fn other(s: &OddQuadSpace, idx: &[Idx]) -> Idx {
    s.theta().into_iter().find(|c| idx.iter().all(|a| c != a && *c != -a)).expect("n = 3 leaves a free index")
}

/// Permutation word moving T_ab to T_kl by conjugation, outermost first.
pub fn route(s: &OddQuadSpace, a: Idx, b: Idx, k: Idx, l: Idx) -> Vec<ElemGen> {
    let start = (a, b);
    let mut prev: BTreeMap<(Idx, Idx), Option<((Idx, Idx), ElemGen)>> = BTreeMap::new();
    prev.insert(start, None);
    let mut q = VecDeque::from([start]);
    let th = s.theta();
    while let Some(cur) = q.pop_front() {
        if cur == (k, l) {
            break;
        }
        let (i, j) = cur;
        for &c in &th {
            if c == i || c == -i || c == j || c == -j {
                continue;
            }
            for (nxt, p) in [((c, j), ElemGen::perm(c, i)), ((i, c), ElemGen::perm(c, j))] {
                prev.entry(nxt).or_insert_with(|| {
                    q.push_back(nxt);
                    Some((cur, p))
                });
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = (k, l);
    while let Some(Some((p, g))) = prev.get(&cur) {
        path.push(g.clone());
        cur = *p;
    }
    path
}

/// Conjugator word taking T_i(ξ) to T_k(ξ).
pub fn xtrans(s: &OddQuadSpace, i: Idx, k: Idx) -> Vec<ElemGen> {
    if i == k {
        return Vec::new();
    }
    if k != -i {
        return vec![ElemGen::perm(-k, -i)];
    }
    let j = other(s, &[i]);
    let mut w = xtrans(s, -j, k);
    w.extend(xtrans(s, i, -j));
    w
}

/// The word of one of the three base steps together with the position and value of the
/// short transvection it evaluates to.
pub fn step_word(s: &OddQuadSpace, sg: &Sig, x: RingElem, which: u8) -> (ConjWord, (Idx, Idx), RingElem) {
    let r = s.ring();
    let l = r.lambda();
    let e = |i, j| sg.e(s, i, j);
    let b = |v| r.bar(v);
    let mul = |xs: &[RingElem]| r.mul_all(xs);
    let neg = |v| r.neg(v);
    let z = vec![0; s.rank()];
    let sh = ElemGen::short;
    let xt = |i, t: RingElem| ElemGen::extra(i, crate::heisenberg::HElem::new(z.clone(), t));
    let base = |tau: &[ElemGen]| ConjWord::factor(tau.to_vec(), 1).then(ConjWord::factor(Vec::new(), -1));
    match which {
        1 => {
            let t = mul(&[b(e(2, 2)), e(2, 1)]);
            let tau = vec![
                sh(1, -2, mul(&[l, b(e(2, 3)), e(2, 3)])),
                sh(3, -2, neg(mul(&[l, b(e(2, 3)), e(2, 1)]))),
                sh(3, -1, neg(mul(&[b(e(2, 3)), e(2, 2)]))),
                xt(3, r.trace_sym(t)),
            ];
            let mut w = base(&tau);
            w = ConjWord::comm_gw(s, &[sh(-2, -1, 1)], &w);
            w = w.conjugated(&word_inverse(s, &tau));
            w = ConjWord::comm_gw(s, &[sh(-2, 3, 1)], &w);
            w = ConjWord::comm_gw(s, &[sh(-1, 3, neg(mul(&[l, x])))], &w);
            (w, (-2, 3), mul(&[x, b(e(2, 3)), e(2, 1)]))
        }
        2 => {
            let t = mul(&[b(e(2, 2)), e(2, -1)]);
            let tau = vec![
                sh(2, 1, mul(&[l, b(e(2, 3)), e(2, 3)])),
                sh(3, 1, neg(mul(&[l, b(e(2, 3)), e(2, 2)]))),
                sh(3, -2, mul(&[l, b(e(2, 3)), e(2, -1)])),
                xt(3, neg(r.trace_sym(t))),
            ];
            let mut w = base(&tau);
            w = ConjWord::comm_gw(s, &[sh(-2, 1, 1)], &w);
            w = w.conjugated(&word_inverse(s, &tau));
            w = ConjWord::comm_gw(s, &[sh(1, 2, 1)], &w);
            w = ConjWord::comm_gw(s, &[sh(-1, 3, mul(&[l, x]))], &w);
            (w, (-1, 2), mul(&[x, b(e(2, 3)), e(2, -1)]))
        }
        _ => {
            let t = mul(&[b(e(2, 3)), e(2, -1)]);
            let tau = vec![
                sh(2, 1, neg(mul(&[l, b(e(2, 2)), e(2, 3)]))),
                sh(3, 1, mul(&[l, b(e(2, 2)), e(2, 2)])),
                sh(2, -3, mul(&[l, b(e(2, 2)), e(2, -1)])),
                xt(2, neg(r.trace_sym(t))),
            ];
            let tau_inv = word_inverse(s, &tau);
            let mut w = base(&tau);
            w = ConjWord::comm_gw(s, &[sh(3, 2, 1)], &w);
            w = w.conjugated(&tau_inv);
            let mut eta = tau_inv.clone();
            eta.push(sh(3, 2, 1));
            eta.extend(tau.iter().cloned());
            eta.push(sh(3, 2, r.neg(1)));
            w = ConjWord::comm_gw(s, &[sh(1, 2, 1)], &w);
            w = w.conjugated(&word_inverse(s, &eta));
            w = ConjWord::comm_gw(s, &[sh(2, -1, 1)], &w);
            let l3 = mul(&[l, l, l]);
            w = ConjWord::comm_gw(s, &[sh(-2, 3, mul(&[b(l3), b(x)]))], &w);
            (w, (1, 2), mul(&[x, b(e(2, 3)), e(2, 2)]))
        }
    }
}

/// Base step repositioned to T_kl.
pub fn step_at(s: &OddQuadSpace, sg: &Sig, x: RingElem, which: u8, k: Idx, l: Idx) -> ConjWord {
    let (w, (a, b), _) = step_word(s, sg, x, which);
    w.conjugated(&route(s, a, b, k, l))
}

/// Word for T_kl(x·σ₂₃): 160 factors.
fn entry23_at(s: &OddQuadSpace, sg: &Sig, x: RingElem, k: Idx, l: Idx) -> Result<ConjWord> {
    let r = s.ring();
    let b = |v| r.bar(v);
    let s23 = sg.e(s, 2, 3);
    let g = ElemGen::short(1, 2, r.neg(b(s23)));
    let p = vec![ElemGen::perm(1, 3), ElemGen::perm(2, 1)];
    let mut pg = p.clone();
    pg.push(g);
    // ζ = ^P σ̃ · ^{Pg} σ = ^P [σ̃, g]
    let z = ConjWord::factor(p, -1).then(ConjWord::factor(pg, 1));
    let zm = sg.eval(s, &z);
    let zs = Sig::new(s, zm)?;
    let z22 = zs.e(s, 2, 2);
    let z23 = zs.e(s, 2, 3);
    let di = r.sub(z22, 1);
    let dj = r.sub(z23, b(s23));
    let d_i = r.mul(s23, di);
    let d_j = r.mul(b(dj), r.add(1, di));
    debug_assert_eq!(r.sub(r.sub(r.sub(r.mul(b(z23), z22), s23), d_i), d_j), 0);
    let g1 = r.mul(b(s23), sg.e(s, 2, 1));
    let g2 = r.mul(b(s23), sg.e(s, 2, -1));
    let g3 = r.mul(b(s23), sg.e(s, 2, 2));
    let ti = r.neg(r.mul(x, d_i));
    let tj = r.neg(r.mul(x, d_j));
    let ci = solve_combination(r, &[g1, g2], ti).ok_or(OdduError::NotInIdeal(ti))?;
    let cj = solve_combination(r, &[g1, g2, g3], tj).ok_or(OdduError::NotInIdeal(tj))?;
    let mut w = step_at(s, &zs, x, 3, k, l).substitute(&z);
    w.append(step_at(s, sg, ci[0], 1, k, l));
    w.append(step_at(s, sg, ci[1], 2, k, l));
    w.append(step_at(s, sg, cj[0], 1, k, l));
    w.append(step_at(s, sg, cj[1], 2, k, l));
    w.append(step_at(s, sg, cj[2], 3, k, l));
    Ok(w)
}

/// Word for T_kl(x·σ_ij), i ≠ ±j: 160 factors.
pub fn entry_at(s: &OddQuadSpace, sg: &Sig, x: RingElem, i: Idx, j: Idx, k: Idx, l: Idx) -> Result<ConjWord> {
    let q = route(s, i, j, 2, 3);
    let rho = sg.conj(s, &q);
    debug_assert_eq!(rho.e(s, 2, 3), sg.e(s, i, j));
    Ok(entry23_at(s, &rho, x, k, l)?.substitute_conj(&q))
}

/// The scalar building blocks reachable as short transvection parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Atom {
    /// σ_ij, i ≠ ±j
    Entry(Idx, Idx),
    /// σ_{i,−i}
    AntiDiag(Idx),
    /// (σ^{0h} v₀)_i
    ZeroColumn(Vec<RingElem>, Idx),
    /// B₀(v₀, σ^{h0} e_j)
    ZeroRow(Vec<RingElem>, Idx),
    /// σ_ii − σ_jj, i ≠ ±j
    DiagDiff(Idx, Idx),
    /// σ_ii − σ_{−i,−i}
    DiagDiffOpp(Idx),
}

impl Atom {
    pub fn value(&self, s: &OddQuadSpace, sg: &Sig) -> RingElem {
        let r = s.ring();
        match self {
            Atom::Entry(i, j) => sg.e(s, *i, *j),
            Atom::AntiDiag(i) => sg.e(s, *i, -*i),
            Atom::ZeroColumn(v0, i) => sg.m.mul_vec(r, &s.from_v0(v0))[s.pos(*i)],
            Atom::ZeroRow(v0, j) => {
                let col = sg.m.column(s.pos(*j));
                s.v0().b(v0, s.v0_part(&col))
            }
            Atom::DiagDiff(i, j) => r.sub(sg.e(s, *i, *i), sg.e(s, *j, *j)),
            Atom::DiagDiffOpp(i) => r.sub(sg.e(s, *i, *i), sg.e(s, -*i, -*i)),
        }
    }

    /// Factor budget of `realize` in units of 160.
    pub fn cost_units(&self) -> usize {
        match self {
            Atom::Entry(..) => 1,
            Atom::AntiDiag(_) => 2,
            Atom::ZeroColumn(..) | Atom::ZeroRow(..) | Atom::DiagDiff(..) => 3,
            Atom::DiagDiffOpp(_) => 6,
        }
    }

    pub fn validate(&self, s: &OddQuadSpace) -> Result<()> {
        let pair = |i: Idx, j: Idx| s.is_index(i) && s.is_index(j) && i != j && i != -j;
        let ok = match self {
            Atom::Entry(i, j) | Atom::DiagDiff(i, j) => pair(*i, *j),
            Atom::AntiDiag(i) | Atom::DiagDiffOpp(i) => s.is_index(*i),
            Atom::ZeroColumn(v0, i) | Atom::ZeroRow(v0, i) => {
                if v0.len() != s.rank() {
                    return Err(OdduError::DimensionMismatch { expected: s.rank(), got: v0.len() });
                }
                if s.lift_x(v0).is_none() {
                    return Err(OdduError::PayloadUnavailable(v0.clone()));
                }
                s.is_index(*i)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(OdduError::InvalidIndices(format!("{self:?}")))
        }
    }
}

fn lift(s: &OddQuadSpace, v0: &[RingElem]) -> Result<RingElem> {
    s.lift_x(v0).ok_or_else(|| OdduError::PayloadUnavailable(v0.to_vec()))
}

/// Word for T_kl(c·value(atom)).
pub fn realize(s: &OddQuadSpace, sg: &Sig, atom: &Atom, c: RingElem, k: Idx, l: Idx) -> Result<ConjWord> {
    let r = s.ring();
    let c = c % r.modulus();
    Ok(match atom {
        Atom::Entry(i, j) => entry_at(s, sg, c, *i, *j, k, l)?,
        Atom::AntiDiag(i) => {
            let i = *i;
            let j = other(s, &[i]);
            let g = vec![ElemGen::short(j, i, 1)];
            let rho = sg.conj(s, &g);
            entry_at(s, &rho, c, j, -i, k, l)?.substitute_conj(&g).then(entry_at(s, sg, r.neg(c), j, -i, k, l)?)
        }
        Atom::ZeroColumn(v0, i) => {
            let i = *i;
            let j = other(s, &[i]);
            let x = lift(s, v0)?;
            let g = vec![ElemGen::extra(-j, crate::heisenberg::HElem::new(v0.clone(), x))];
            let rho = sg.conj(s, &g);
            entry_at(s, &rho, c, i, j, k, l)?
                .substitute_conj(&g)
                .then(entry_at(s, sg, r.neg(c), i, j, k, l)?)
                .then(entry_at(s, sg, r.mul_all(&[c, s.eps(-j), r.bar(x)]), i, -j, k, l)?)
        }
        Atom::ZeroRow(v0, j) => {
            let j = *j;
            let i = other(s, &[j]);
            let x = lift(s, v0)?;
            let g = vec![ElemGen::extra(i, crate::heisenberg::HElem::new(v0.clone(), x))];
            let rho = sg.conj(s, &g);
            let ei = r.inv(s.eps(i))?;
            entry_at(s, &rho, r.neg(r.mul(c, ei)), i, j, k, l)?
                .substitute_conj(&g)
                .then(entry_at(s, sg, r.mul(c, ei), i, j, k, l)?)
                .then(entry_at(s, sg, r.mul(c, x), -i, j, k, l)?)
        }
        Atom::DiagDiff(i, j) => {
            let (i, j) = (*i, *j);
            let g = vec![ElemGen::short(j, i, 1)];
            let rho = sg.conj(s, &g);
            entry_at(s, &rho, c, j, i, k, l)?
                .substitute_conj(&g)
                .then(entry_at(s, sg, c, i, j, k, l)?)
                .then(entry_at(s, sg, r.neg(c), j, i, k, l)?)
        }
        Atom::DiagDiffOpp(i) => {
            let i = *i;
            let j = other(s, &[i]);
            realize(s, sg, &Atom::DiagDiff(i, j), c, k, l)?.then(realize(s, sg, &Atom::DiagDiff(j, -i), c, k, l)?)
        }
    })
}

/// Word for T_kl(t) with t in the ideal spanned by the atom values.
pub fn lin(s: &OddQuadSpace, sg: &Sig, t: RingElem, atoms: &[Atom], k: Idx, l: Idx) -> Result<ConjWord> {
    let r = s.ring();
    let vals: Vec<RingElem> = atoms.iter().map(|a| a.value(s, sg)).collect();
    let t = t % r.modulus();
    let cs = solve_combination(r, &vals, t).ok_or(OdduError::NotInIdeal(t))?;
    let mut w = ConjWord::empty();
    for (a, c) in atoms.iter().zip(cs) {
        if c != 0 {
            w.append(realize(s, sg, a, c, k, l)?);
        }
    }
    Ok(w)
}

/// Word for T_k(0, coef·v + bar(coef·v)) with v the atom value, as a commutator
/// [T_kj(p), T_{j,−k}(1)]: twice the atom budget.
pub fn r9_word(s: &OddQuadSpace, sg: &Sig, atom: &Atom, coef: RingElem, k: Idx) -> Result<ConjWord> {
    let r = s.ring();
    let j = other(s, &[k]);
    let u = r.inv(r.neg(r.mul(s.eps(-k), r.lambda())))?;
    let wp = realize(s, sg, atom, r.mul(coef, u), k, j)?;
    Ok(ConjWord::comm_wg(s, &wp, &[ElemGen::short(j, -k, 1)]))
}

/// Word for T_k(0, d) with d ∈ (1 + λ)·I(atom values).
pub fn lin9(s: &OddQuadSpace, sg: &Sig, d: RingElem, atoms: &[Atom], k: Idx) -> Result<ConjWord> {
    let r = s.ring();
    let vals: Vec<RingElem> = atoms.iter().map(|a| r.mul(r.add(1, r.lambda()), a.value(s, sg))).collect();
    let d = d % r.modulus();
    let cs = solve_combination(r, &vals, d).ok_or(OdduError::NotInIdeal(d))?;
    let mut w = ConjWord::empty();
    for (a, c) in atoms.iter().zip(cs) {
        if c != 0 {
            w.append(r9_word(s, sg, a, c, k)?);
        }
    }
    Ok(w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LinearKind {
    Entry { i: Idx, j: Idx },
    AntiDiag { i: Idx },
    ZeroColumn { v0: Vec<RingElem>, i: Idx },
    ZeroRow { v0: Vec<RingElem>, j: Idx },
    DiagDiff { i: Idx, j: Idx },
    DiagDiffOpp { i: Idx },
}

impl LinearKind {
    pub fn atom(&self) -> Atom {
        match self {
            LinearKind::Entry { i, j } => Atom::Entry(*i, *j),
            LinearKind::AntiDiag { i } => Atom::AntiDiag(*i),
            LinearKind::ZeroColumn { v0, i } => Atom::ZeroColumn(v0.clone(), *i),
            LinearKind::ZeroRow { v0, j } => Atom::ZeroRow(v0.clone(), *j),
            LinearKind::DiagDiff { i, j } => Atom::DiagDiff(*i, *j),
            LinearKind::DiagDiffOpp { i } => Atom::DiagDiffOpp(*i),
        }
    }

    /// Factor bound: 160, 320, 480, 480, 480, 960.
    pub fn bound(&self) -> usize {
        160 * self.atom().cost_units()
    }
}

pub(crate) fn check_pair(s: &OddQuadSpace, k: Idx, l: Idx) -> Result<()> {
    if !(s.is_index(k) && s.is_index(l) && k != l && k != -l) {
        return Err(OdduError::InvalidIndices(format!("({k},{l})")));
    }
    Ok(())
}
