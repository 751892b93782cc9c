//! ESD transvections, elementary transvections and permutations.

pub mod relations;

use crate::error::{OdduError, Result};
use crate::group::UElem;
use crate::heisenberg::HElem;
use crate::matrix::Mat;
use crate::quadratic::{Idx, OddQuadSpace};
use crate::ring::RingElem;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// An elementary generator of EU: T_ij(x), T_i(v₀,x) or P_ij.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ElemGen {
    Short { i: Idx, j: Idx, x: RingElem },
    Extra { i: Idx, p: HElem },
    Perm { i: Idx, j: Idx },
}

impl ElemGen {
    pub fn short(i: Idx, j: Idx, x: RingElem) -> Self {
        ElemGen::Short { i, j, x }
    }

    pub fn extra(i: Idx, p: HElem) -> Self {
        ElemGen::Extra { i, p }
    }

    pub fn perm(i: Idx, j: Idx) -> Self {
        ElemGen::Perm { i, j }
    }

    pub fn inverse(&self, s: &OddQuadSpace) -> ElemGen {
        match self {
            ElemGen::Short { i, j, x } => ElemGen::Short { i: *i, j: *j, x: s.ring().neg(*x) },
            ElemGen::Extra { i, p } => ElemGen::Extra { i: *i, p: s.v0().hneg(p) },
            ElemGen::Perm { i, j } => ElemGen::Perm { i: *j, j: *i },
        }
    }

    /// Checks index constraints and the payload.
    pub fn validate(&self, s: &OddQuadSpace) -> Result<()> {
        let pair_ok = |i: Idx, j: Idx| s.is_index(i) && s.is_index(j) && i != j && i != -j;
        match self {
            ElemGen::Short { i, j, .. } | ElemGen::Perm { i, j } => {
                if !pair_ok(*i, *j) {
                    return Err(OdduError::InvalidIndices(format!("({i},{j})")));
                }
            }
            ElemGen::Extra { i, p } => {
                if !s.is_index(*i) {
                    return Err(OdduError::InvalidIndices(format!("{i}")));
                }
                if p.v.len() != s.rank() {
                    return Err(OdduError::DimensionMismatch { expected: s.rank(), got: p.v.len() });
                }
                if !s.in_l0(p) {
                    return Err(OdduError::PayloadNotInFormParameter { v: p.v.clone(), x: p.x });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for ElemGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElemGen::Short { i, j, x } => write!(f, "T({i},{j};{x})"),
            ElemGen::Extra { i, p } => {
                let v: Vec<String> = p.v.iter().map(|c| c.to_string()).collect();
                write!(f, "T({i};({}),{})", v.join(","), p.x)
            }
            ElemGen::Perm { i, j } => write!(f, "P({i},{j})"),
        }
    }
}

/// Sparse N with gen_matrix(g) = I + N, from the closed-form block displays.
pub fn gen_delta(s: &OddQuadSpace, g: &ElemGen) -> Vec<(usize, usize, RingElem)> {
    let r = s.ring();
    let mut out = Vec::new();
    let mut push = |row: usize, col: usize, v: RingElem| {
        if v != 0 {
            out.push((row, col, v));
        }
    };
    match g {
        ElemGen::Short { i, j, x } => {
            let (i, j) = (*i, *j);
            push(s.pos(i), s.pos(j), *x);
            push(s.pos(-j), s.pos(-i), r.mul(r.mul(s.eps(-j), r.bar(*x)), s.eps(i)));
        }
        ElemGen::Extra { i, p } => {
            let i = *i;
            push(s.pos(i), s.pos(-i), r.mul(s.eps(i), p.x));
            for (k, &c) in p.v.iter().enumerate() {
                push(s.pos0(k), s.pos(-i), r.neg(c));
            }
            let ei = s.eps(i);
            for k in 0..s.rank() {
                let mut fk = vec![0; s.rank()];
                fk[k] = 1;
                push(s.pos(i), s.pos0(k), r.neg(r.mul(ei, s.v0().b(&p.v, &fk))));
            }
        }
        ElemGen::Perm { i, j } => {
            let (i, j) = (*i, *j);
            let m1 = r.neg(1);
            for a in [i, j, -i, -j] {
                push(s.pos(a), s.pos(a), m1);
            }
            push(s.pos(i), s.pos(j), 1);
            push(s.pos(j), s.pos(i), m1);
            // ε₋ᵢ·ε₋ⱼ⁻¹ and its negated mirror; ε values are their own inverses
            let c = r.mul(s.eps(-i), s.eps(-j));
            push(s.pos(-i), s.pos(-j), c);
            push(s.pos(-j), s.pos(-i), r.neg(c));
        }
    }
    out
}

/// Matrix of a generator without validation.
pub fn gen_mat(s: &OddQuadSpace, g: &ElemGen) -> Mat {
    Mat::from_delta(s.ring(), s.dim(), &gen_delta(s, g))
}

pub fn gen_matrix(s: &OddQuadSpace, g: &ElemGen) -> Result<UElem> {
    g.validate(s)?;
    Ok(UElem::from_mat_unchecked(gen_mat(s, g)))
}

/// Product of a generator word, left to right.
pub fn word_mat(s: &OddQuadSpace, gens: &[ElemGen]) -> Mat {
    let mut m = Mat::identity(s.dim());
    for g in gens {
        m.right_apply(s.ring(), &gen_delta(s, g));
    }
    m
}

pub fn word_inverse(s: &OddQuadSpace, gens: &[ElemGen]) -> Vec<ElemGen> {
    gens.iter().rev().map(|g| g.inverse(s)).collect()
}

/// The ESD transvection T_{u,v}(x) for u isotropic, (v,x) ∈ 𝔏 and B(u,v) = 0.
pub fn esd(s: &OddQuadSpace, u: &[RingElem], v: &[RingElem], x: RingElem) -> Result<UElem> {
    if u.len() != s.dim() || v.len() != s.dim() {
        return Err(OdduError::DimensionMismatch { expected: s.dim(), got: u.len().min(v.len()) });
    }
    if !s.is_isotropic(u) {
        return Err(OdduError::PreconditionViolated("u is not isotropic".into()));
    }
    if !s.in_big_l(v, x) {
        return Err(OdduError::PreconditionViolated("(v,x) is not in the form parameter".into()));
    }
    if s.big_b(u, v) != 0 {
        return Err(OdduError::PreconditionViolated("u and v are not orthogonal".into()));
    }
    Ok(UElem::from_mat_unchecked(esd_unchecked(s, u, v, x)))
}

pub fn esd_unchecked(s: &OddQuadSpace, u: &[RingElem], v: &[RingElem], x: RingElem) -> Mat {
    let r = s.ring();
    let d = s.dim();
    let mut m = Mat::identity(d);
    for c in 0..d {
        let mut w = vec![0; d];
        w[c] = 1;
        let buw = s.big_b(u, &w);
        let cu = r.mul(r.bar_one_inv(), r.add(s.big_b(v, &w), r.mul(x, buw)));
        for row in 0..d {
            let add = r.add(r.mul(u[row], cu), r.mul(v[row], buw));
            m.set(row, c, r.add(m.get(row, c), add));
        }
    }
    m
}

/// Factor list for T_{e₁,v}(0) when v is isotropic with v₋₁ = 0: an extra short factor at
/// index 1 followed by T_{i,−1}(v_i) for i running over Θ from 2 to −2.
pub fn esd_special_decomposition(s: &OddQuadSpace, v: &[RingElem]) -> Result<Vec<ElemGen>> {
    if v.len() != s.dim() {
        return Err(OdduError::DimensionMismatch { expected: s.dim(), got: v.len() });
    }
    if !s.is_isotropic(v) {
        return Err(OdduError::PreconditionViolated("v is not isotropic".into()));
    }
    if s.coord(v, -1) != 0 {
        return Err(OdduError::PreconditionViolated("v_{-1} is not zero".into()));
    }
    let r = s.ring();
    let h = s.v0();
    let q = h.haction(&s.q0(v), r.neg(1));
    let t = r.mul(r.bar(1), s.coord(v, 1));
    let p = h.hplus(&q, &HElem::new(vec![0; s.rank()], r.trace_sym(t)));
    if !s.in_l0(&p) {
        return Err(OdduError::PayloadNotInFormParameter { v: p.v, x: p.x });
    }
    let mut out = vec![ElemGen::Extra { i: 1, p }];
    for i in s.theta() {
        if i != 1 && i != -1 {
            out.push(ElemGen::Short { i, j: -1, x: s.coord(v, i) });
        }
    }
    Ok(out)
}

/// A random generator: short with uniform admissible indices and scalar, or extra short with
/// a uniform payload from 𝔏₀.
pub fn random_gen<R: Rng>(s: &OddQuadSpace, rng: &mut R, short: bool) -> ElemGen {
    let th = s.theta();
    let m = s.ring().modulus();
    if short {
        let i = th[rng.gen_range(0..th.len())];
        let js: Vec<Idx> = th.iter().copied().filter(|&j| j != i && j != -i).collect();
        let j = js[rng.gen_range(0..js.len())];
        ElemGen::Short { i, j, x: rng.gen_range(0..m) }
    } else {
        let i = th[rng.gen_range(0..th.len())];
        let l0 = s.l0().elements();
        let p = l0.iter().nth(rng.gen_range(0..l0.len())).cloned().expect("nonempty");
        ElemGen::Extra { i, p }
    }
}

/// A random word in short and extra-short generators.
pub fn random_word<R: Rng>(s: &OddQuadSpace, rng: &mut R, length: usize) -> Vec<ElemGen> {
    (0..length)
        .map(|_| {
            let short = rng.gen_bool(0.6);
            random_gen(s, rng, short)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{inv, is_unitary, mul};
    use crate::heisenberg::{lmin, AHSpace};
    use crate::ring::PseudoRing;

    fn space(m: u64, l: u64, gram: Vec<Vec<i64>>) -> OddQuadSpace {
        OddQuadSpace::with_lmax(3, AHSpace::new(PseudoRing::new(m, l).unwrap(), gram).unwrap()).unwrap()
    }

    fn esd_short(s: &OddQuadSpace, i: Idx, j: Idx, x: u64) -> Mat {
        let r = s.ring();
        let v: Vec<u64> = s.e(i).iter().map(|&c| r.neg(r.mul(r.mul(c, x), s.eps(j)))).collect();
        esd(s, &s.e(-j), &v, 0).unwrap().into_mat()
    }

    fn esd_extra(s: &OddQuadSpace, i: Idx, p: &HElem) -> Mat {
        let r = s.ring();
        let v: Vec<u64> = s.from_v0(&p.v).iter().map(|&c| r.mul(c, s.eps(-i))).collect();
        let em = s.eps(-i);
        let x = r.mul(r.mul(r.mul(r.bar(em), r.bar_one_inv()), p.x), em);
        esd(s, &s.e(i), &v, x).unwrap().into_mat()
    }

    #[test]
    fn short_example() {
        let s = space(5, 1, vec![]);
        let t = gen_matrix(&s, &ElemGen::short(1, 3, 2)).unwrap();
        let mut want = Mat::identity(6);
        want.set(s.pos(1), s.pos(3), 2);
        want.set(s.pos(-3), s.pos(-1), 3);
        assert_eq!(t.mat(), &want);
    }

    #[test]
    fn perm_example() {
        let s = space(5, 1, vec![]);
        let p = gen_matrix(&s, &ElemGen::perm(1, 2)).unwrap();
        assert_eq!(p.col(&s, 2), s.e(1));
        let r = s.ring();
        let neg_e2: Vec<u64> = s.e(2).iter().map(|&c| r.neg(c)).collect();
        assert_eq!(p.col(&s, 1), neg_e2);
    }

    #[test]
    fn closed_forms_match_esd_exhaustively() {
        for (m, l, g) in [(4, 1, vec![]), (5, 4, vec![]), (8, 3, vec![]), (5, 1, vec![vec![0, 1], vec![-1, 0]]), (8, 3, vec![vec![0, 1], vec![5, 0]])] {
            let s = space(m, l, g);
            for i in s.theta() {
                for j in s.theta() {
                    if j == i || j == -i {
                        continue;
                    }
                    for x in 0..m {
                        assert_eq!(gen_mat(&s, &ElemGen::short(i, j, x)), esd_short(&s, i, j, x));
                    }
                }
                for p in s.l0().elements() {
                    assert_eq!(gen_mat(&s, &ElemGen::extra(i, p.clone())), esd_extra(&s, i, p));
                }
            }
        }
    }

    #[test]
    fn perm_closed_form_matches_product_and_inverse() {
        let s = space(8, 3, vec![vec![0, 1], vec![5, 0]]);
        for i in s.theta() {
            for j in s.theta() {
                if j == i || j == -i {
                    continue;
                }
                let prod = word_mat(&s, &[ElemGen::short(i, j, 1), ElemGen::short(j, i, 7), ElemGen::short(i, j, 1)]);
                let p = gen_mat(&s, &ElemGen::perm(i, j));
                assert_eq!(p, prod);
                assert_eq!(p.inverse(s.ring()).unwrap(), gen_mat(&s, &ElemGen::perm(j, i)));
                for k in 0..2 {
                    assert_eq!(p.column(s.pos0(k)), s.f(k));
                }
            }
        }
    }

    #[test]
    fn generator_inverses() {
        let s = space(6, 1, vec![vec![0, 1], vec![5, 0]]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        use rand::SeedableRng;
        for _ in 0..200 {
            let short = rng.gen_bool(0.5);
            let g = random_gen(&s, &mut rng, short);
            let a = gen_matrix(&s, &g).unwrap();
            assert!(is_unitary(&s, &a).unwrap());
            let b = gen_matrix(&s, &g.inverse(&s)).unwrap();
            assert!(mul(&s, &a, &b).mat().is_identity());
            assert_eq!(inv(&s, &a).unwrap(), b);
        }
    }

    #[test]
    fn validation_errors() {
        let s = space(5, 1, vec![]);
        assert!(matches!(gen_matrix(&s, &ElemGen::short(1, -1, 1)), Err(OdduError::InvalidIndices(_))));
        assert!(matches!(gen_matrix(&s, &ElemGen::perm(4, 1)), Err(OdduError::InvalidIndices(_))));
        let ring = PseudoRing::new(5, 1).unwrap();
        let v0 = AHSpace::new(ring, vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let sm = OddQuadSpace::new(3, v0.clone(), lmin(&v0)).unwrap();
        assert!(matches!(
            gen_matrix(&sm, &ElemGen::extra(1, HElem::new(vec![1, 0], 0))),
            Err(OdduError::PayloadNotInFormParameter { .. })
        ));
    }

    #[test]
    fn esd_examples_and_preconditions() {
        let s = space(5, 1, vec![vec![0, 1], vec![-1, 0]]);
        assert!(esd(&s, &s.e(1), &s.zero_vec(), 0).unwrap().mat().is_identity());
        assert!(matches!(esd(&s, &s.e(1), &s.e(-1), 0), Err(OdduError::PreconditionViolated(_))));
        let t = esd(&s, &s.e(1), &s.e(2), 0).unwrap();
        assert!(is_unitary(&s, &t).unwrap());
        // λ = −1: e₁ + e₋₁ has Q⁰ = (·, −1) with nonzero trace
        let sm = space(5, 4, vec![]);
        let mut u = sm.e(1);
        u[sm.pos(-1)] = 1;
        assert!(matches!(esd(&sm, &u, &sm.zero_vec(), 0), Err(OdduError::PreconditionViolated(_))));
    }

    #[test]
    fn special_decomposition_examples() {
        let s = space(5, 1, vec![vec![0, 1], vec![-1, 0]]);
        let gens = esd_special_decomposition(&s, &s.zero_vec()).unwrap();
        assert!(word_mat(&s, &gens).is_identity());
        let mut v = s.zero_vec();
        v[s.pos(2)] = 3;
        let gens = esd_special_decomposition(&s, &v).unwrap();
        let nontrivial: Vec<&ElemGen> = gens.iter().filter(|g| !gen_mat(&s, g).is_identity()).collect();
        assert_eq!(nontrivial, vec![&ElemGen::short(2, -1, 3)]);
        let f = s.f(0);
        let gens = esd_special_decomposition(&s, &f).unwrap();
        assert_eq!(word_mat(&s, &gens), esd(&s, &s.e(1), &f, 0).unwrap().into_mat());
        assert!(esd_special_decomposition(&s, &s.e(-1)).is_err());
    }
}
