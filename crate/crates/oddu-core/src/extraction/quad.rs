//! Words for extra short transvections: T_k(Q⁰(σe_j)) and the V₀-defect transvections.

use super::linear::{lin, lin9, other, realize, xtrans, Atom, Sig};
use super::word::ConjWord;
use crate::error::{OdduError, Result};
use crate::heisenberg::HElem;
use crate::quadratic::{Idx, OddQuadSpace};
use crate::ring::{solve_combination, RingElem};
use crate::transvections::{esd_special_decomposition, gen_mat, word_inverse, word_mat, ElemGen};

/// Word for T_k(ξ ⇀ coef·value(atom)), ξ ∈ 𝔏₀, from the commutator
/// [T_i(v₀,−bar x), T_{−i,j}(y)] with a short correction: three atom budgets.
pub fn r8(s: &OddQuadSpace, sg: &Sig, xi: &HElem, atom: &Atom, coef: RingElem, k: Idx) -> Result<ConjWord> {
    let r = s.ring();
    let j = -k;
    let i = other(s, &[k]);
    let z = r.neg(r.bar(xi.x));
    let g = vec![ElemGen::extra(i, HElem::new(xi.v.clone(), z))];
    let wy = realize(s, sg, atom, coef, -i, j)?;
    let corr = realize(s, sg, atom, r.neg(r.mul_all(&[s.eps(i), z, coef])), i, j)?;
    Ok(corr.then(ConjWord::comm_gw(s, &g, &wy)))
}

fn lin_r8(s: &OddQuadSpace, sg: &Sig, xi: &HElem, t: RingElem, atoms: &[Atom], k: Idx) -> Result<ConjWord> {
    let r = s.ring();
    let vals: Vec<RingElem> = atoms.iter().map(|a| a.value(s, sg)).collect();
    let cs = solve_combination(r, &vals, t).ok_or(OdduError::NotInIdeal(t))?;
    let mut w = ConjWord::empty();
    for (a, c) in atoms.iter().zip(cs) {
        if c != 0 {
            w.append(r8(s, sg, xi, a, c, k)?);
        }
    }
    Ok(w)
}

/// Word for T_3(Q⁰(σe₁) ⇀ σ₁₁x), with the target payload.
pub fn step1_word(s: &OddQuadSpace, sg: &Sig, x: RingElem) -> Result<(ConjWord, HElem)> {
    let r = s.ring();
    let h = s.v0();
    let lam = r.lambda();
    let e = |i, j| sg.e(s, i, j);
    let mut u = s.zero_vec();
    u[s.pos(-2)] = sg.ti(s, -1, -1);
    u[s.pos(-1)] = r.neg(sg.ti(s, -1, -2));
    let v = sg.mi.mul_vec(r, &u);
    let d = esd_special_decomposition(s, &v)?;
    let dinv = word_inverse(s, &d);
    let tau_w = realize(s, sg, &Atom::Entry(-3, 1), e(2, 1), -3, 1)?
        .then(realize(s, sg, &Atom::Entry(-3, 1), r.neg(e(1, 1)), -3, 2)?);
    let inner = ConjWord::factor(d.clone(), 1).then(ConjWord::factor(Vec::new(), -1)).then(tau_w);
    let t23 = ElemGen::short(2, -3, x);
    let z = ConjWord::comm_gw(s, &[t23.clone()], &inner).conjugated(&dinv);
    let zm = sg.eval(s, &z);
    // ζ = A·B with A = [T_{e₁,−v}(0), T_{2,−3}(x)] and B = T_{e₃,w}(y); read B off the matrix
    let dm = word_mat(s, &dinv);
    let tm = gen_mat(s, &t23);
    let a = dm
        .mul(r, &tm)
        .mul(r, &dm.inverse(r)?)
        .mul(r, &gen_mat(s, &t23.inverse(s)));
    let bm = a.inverse(r)?.mul(r, &zm);
    let mut col = bm.column(s.pos(-3));
    col[s.pos(-3)] = r.sub(col[s.pos(-3)], 1);
    let c1 = col[s.pos(1)];
    let c2 = col[s.pos(2)];
    let c3 = col[s.pos(-2)];
    let c4 = col[s.pos(-1)];
    let w0: Vec<RingElem> = s.v0_part(&col).iter().map(|&t| r.neg(t)).collect();
    let y = r.mul(lam, col[s.pos(3)]);
    let chi = HElem::new(w0, r.sub(r.sub(y, r.mul(c1, c4)), r.mul(c2, c3)));
    let target = h.haction(&s.q0(&sg.m.column(s.pos(1))), r.mul(e(1, 1), x));
    let diff = h.hplus(&chi, &h.hneg(&target));
    if diff.v.iter().any(|&c| c != 0) {
        return Err(OdduError::PreconditionViolated("step 1 vector parts disagree".into()));
    }
    let v2 = s.coord(&v, -2);
    let v3 = s.coord(&v, -3);
    let aa = r.mul_all(&[x, r.bar(v2), v3]);
    let mut w = lin9(s, sg, r.neg(diff.x), &[Atom::Entry(3, 1), Atom::Entry(-2, 1)], 3)?;
    w.append(lin(s, sg, r.neg(c4), &[Atom::AntiDiag(-1), Atom::Entry(-2, 1), Atom::Entry(3, 1)], -1, -3)?);
    w.append(lin(s, sg, r.neg(c3), &[Atom::Entry(-2, 1), Atom::Entry(3, 1)], -2, -3)?);
    w.append(lin(s, sg, r.neg(c2), &[Atom::Entry(2, 1)], 2, -3)?);
    let t5 = r.neg(r.add(c1, r.mul_all(&[lam, x, r.bar(v2)])));
    w.append(lin(s, sg, t5, &[Atom::DiagDiff(2, 1), Atom::Entry(1, 2)], 1, -3)?);
    w.append(lin(s, sg, r.neg(r.mul(x, v3)), &[Atom::Entry(2, 3), Atom::Entry(2, 1)], 2, -1)?);
    w.append(lin9(s, sg, r.neg(r.trace_sym(aa)), &[Atom::Entry(2, 3), Atom::Entry(2, 1)], 1)?);
    w.append(z);
    Ok((w, target))
}

/// Word for T_k(Q⁰(σe₁) ⇀ c), with the payload.
fn q0_e1(s: &OddQuadSpace, sg: &Sig, k: Idx, c: RingElem) -> Result<(ConjWord, HElem)> {
    let r = s.ring();
    let h = s.v0();
    let q = s.q0(&sg.m.column(s.pos(1)));
    let (w1, t1) = step1_word(s, sg, r.mul(c, sg.ti(s, 1, 1)))?;
    let mut w = w1.conjugated(&xtrans(s, 3, k));
    let mut acc = t1;
    for sx in [2, 3, -3, -2, -1] {
        let atom = if sx == -1 { Atom::AntiDiag(-1) } else { Atom::Entry(sx, 1) };
        let coef = r.mul(c, sg.ti(s, 1, sx));
        w.append(r8(s, sg, &q, &atom, coef, k)?);
        acc = h.hplus(&acc, &h.haction(&q, r.mul(coef, sg.e(s, sx, 1))));
    }
    let xb = s.theta().iter().fold(1, |t, &sx| r.sub(t, r.mul(sg.ti(s, 1, sx), sg.e(s, sx, 1))));
    let cxb = r.mul(c, xb);
    if cxb != 0 {
        w.append(lin_r8(s, sg, &q, cxb, &[Atom::ZeroRow(q.v.clone(), -1)], k)?);
    }
    acc = h.hplus(&acc, &h.haction(&q, cxb));
    let qc = h.haction(&q, c);
    let rest = h.hplus(&h.hneg(&acc), &qc);
    if rest.v.iter().any(|&t| t != 0) {
        return Err(OdduError::PreconditionViolated("step 2 vector parts disagree".into()));
    }
    if rest.x != 0 {
        w.append(lin9(s, sg, rest.x, &[Atom::AntiDiag(-1), Atom::Entry(2, 1), Atom::Entry(3, 1)], k)?);
    }
    Ok((w, qc))
}

/// Word for T_k(Q⁰(σe_j) ⇀ c), with the payload.
pub fn q0_word(s: &OddQuadSpace, sg: &Sig, j: Idx, k: Idx, c: RingElem) -> Result<(ConjWord, HElem)> {
    if j == 1 {
        return q0_e1(s, sg, k, c);
    }
    let h = s.v0();
    let conj = if j == -1 { vec![ElemGen::perm(1, 2), ElemGen::perm(2, -1)] } else { vec![ElemGen::perm(1, j)] };
    let rho = sg.conj(s, &conj);
    let (w0, q1) = q0_e1(s, &rho, k, c)?;
    let mut w = w0.substitute_conj(&conj);
    let q = h.haction(&s.q0(&sg.m.column(s.pos(j))), c);
    let d = h.hplus(&h.hneg(&q1), &q);
    if d.v.iter().any(|&t| t != 0) {
        return Err(OdduError::PreconditionViolated("transport vector parts disagree".into()));
    }
    if d.x != 0 {
        let atoms = if j == -1 {
            vec![Atom::Entry(2, -1), Atom::AntiDiag(1)]
        } else {
            vec![Atom::Entry(1, j), Atom::AntiDiag(-j)]
        };
        w.append(lin9(s, sg, d.x, &atoms, k)?);
    }
    Ok((w, q))
}

/// Word for T_k((σ^{00} − σ_jj)v₀, x′) with the payload (x′ as produced).
pub fn v0_defect_word(s: &OddQuadSpace, sg: &Sig, v0: &[RingElem], j: Idx, k: Idx) -> Result<(ConjWord, HElem, [usize; 5])> {
    let r = s.ring();
    let h = s.v0();
    let x = s.lift_x(v0).ok_or_else(|| OdduError::PayloadUnavailable(v0.to_vec()))?;
    let xi = HElem::new(v0.to_vec(), x);
    let g = vec![ElemGen::extra(-j, xi.clone())];
    let rho = sg.conj(s, &g);
    let (w1, p1) = q0_word(s, &rho, j, k, 1)?;
    let w1 = w1.substitute_conj(&g);
    let (w2, p2) = q0_word(s, sg, j, k, r.neg(1))?;
    let cx = r.mul(s.eps(-j), r.bar(x));
    let (w3, p3) = q0_word(s, sg, -j, k, cx)?;
    let w4 = r8(s, sg, &xi, &Atom::AntiDiag(j), r.neg(cx), k)?;
    let p4 = h.haction(&xi, r.neg(r.mul(cx, sg.e(s, j, -j))));
    let c_atom = Atom::ZeroColumn(v0.to_vec(), j);
    let w5 = r8(s, sg, &xi, &c_atom, 1, k)?;
    let p5 = h.haction(&xi, c_atom.value(s, sg));
    let lens = [w1.len(), w2.len(), w3.len(), w4.len(), w5.len()];
    let mut p = HElem::zero(s.rank());
    for t in [&p1, &p2, &p3, &p4, &p5] {
        p = h.hplus(&p, t);
    }
    let full = sg.m.mul_vec(r, &s.from_v0(v0));
    let sjj = sg.e(s, j, j);
    let want: Vec<RingElem> = s.v0_part(&full).iter().zip(v0).map(|(&a, &b)| r.sub(a, r.mul(b, sjj))).collect();
    if p.v != want {
        return Err(OdduError::PreconditionViolated("defect vector part disagrees".into()));
    }
    let w = w1.then(w2).then(w3).then(w4).then(w5);
    Ok((w, p, lens))
}
