//! Explicit words of elementary σ-conjugates for transvections, the level of the normal
//! closure of σ, and the sandwich certificate. Fixed n = 3.

pub mod linear;
pub mod quad;
pub mod word;

pub use linear::{other, route, xtrans, Atom, LinearKind, Sig};
pub use word::{ConjFactor, ConjWord};

use crate::error::{OdduError, Result};
use crate::group::{is_unitary, UElem};
use crate::heisenberg::HElem;
use crate::ideals::{close_relative, in_cu_max, in_full_congruence, in_normalizer, lemcu_hypotheses, OddFormIdeal};
use crate::quadratic::{Idx, OddQuadSpace};
use crate::ring::{ideal_generated, RingElem};
use crate::transvections::{gen_mat, ElemGen};
use linear::{check_pair, require_n3};
use rayon::prelude::*;
use serde::Serialize;

pub const STEP_LENGTHS: [usize; 3] = [16, 16, 32];
pub const Q0_BOUND: usize = 10564;
pub const V0_DEFECT_BOUND: usize = 34092;

/// A word together with the transvection it was built to equal.
#[derive(Clone, Debug, Serialize)]
pub struct Extraction {
    pub target: String,
    pub generator: ElemGen,
    pub length: usize,
    pub bound: usize,
    pub verified: bool,
    pub word: ConjWord,
}

impl Extraction {
    fn build(s: &OddQuadSpace, sg: &Sig, word: ConjWord, generator: ElemGen, bound: usize) -> Self {
        let verified = word.len() <= bound && sg.eval(s, &word) == gen_mat(s, &generator);
        Extraction { target: generator.to_string(), length: word.len(), bound, verified, word, generator }
    }
}

fn prepare(s: &OddQuadSpace, sigma: &UElem) -> Result<Sig> {
    require_n3(s)?;
    if !is_unitary(s, sigma)? {
        return Err(OdduError::NotUnitary);
    }
    Sig::new(s, sigma.mat().clone())
}

/// The base step words: step 1 gives T_{−2,3}(x·bar σ₂₃·σ₂₁), step 2 T_{−1,2}(x·bar σ₂₃·σ_{2,−1}),
/// step 3 T₁₂(x·bar σ₂₃·σ₂₂).
pub fn extract_step(s: &OddQuadSpace, sigma: &UElem, step: u8, x: RingElem) -> Result<Extraction> {
    if !(1..=3).contains(&step) {
        return Err(OdduError::InvalidIndices(format!("step {step}")));
    }
    let sg = prepare(s, sigma)?;
    let (w, (k, l), t) = linear::step_word(s, &sg, x % s.ring().modulus(), step);
    let bound = STEP_LENGTHS[step as usize - 1];
    debug_assert_eq!(w.len(), bound);
    Ok(Extraction::build(s, &sg, w, ElemGen::short(k, l, t), bound))
}

/// T_kl(c·value) for the scalar named by `kind`.
pub fn extract_linear(s: &OddQuadSpace, sigma: &UElem, kind: &LinearKind, k: Idx, l: Idx, c: RingElem) -> Result<Extraction> {
    let sg = prepare(s, sigma)?;
    check_pair(s, k, l)?;
    let atom = kind.atom();
    atom.validate(s)?;
    let w = linear::realize(s, &sg, &atom, c, k, l)?;
    let t = s.ring().mul(c % s.ring().modulus(), atom.value(s, &sg));
    Ok(Extraction::build(s, &sg, w, ElemGen::short(k, l, t), kind.bound()))
}

/// T_k(Q⁰(σe_j)).
pub fn extract_q0(s: &OddQuadSpace, sigma: &UElem, j: Idx, k: Idx) -> Result<Extraction> {
    let sg = prepare(s, sigma)?;
    if !s.is_index(j) || !s.is_index(k) {
        return Err(OdduError::InvalidIndices(format!("({j},{k})")));
    }
    let (w, p) = quad::q0_word(s, &sg, j, k, 1)?;
    if !s.in_l0(&p) {
        return Err(OdduError::PayloadNotInFormParameter { v: p.v, x: p.x });
    }
    Ok(Extraction::build(s, &sg, w, ElemGen::extra(k, p), Q0_BOUND))
}

/// T_k((σ^{00} − σ_jj)v₀, x′) with x′ produced by the construction.
pub fn extract_v0_defect(s: &OddQuadSpace, sigma: &UElem, v0: &[RingElem], j: Idx, k: Idx) -> Result<Extraction> {
    let sg = prepare(s, sigma)?;
    if !s.is_index(j) || !s.is_index(k) {
        return Err(OdduError::InvalidIndices(format!("({j},{k})")));
    }
    if v0.len() != s.rank() {
        return Err(OdduError::DimensionMismatch { expected: s.rank(), got: v0.len() });
    }
    let (w, p, _) = quad::v0_defect_word(s, &sg, v0, j, k)?;
    if !s.in_l0(&p) {
        return Err(OdduError::PayloadNotInFormParameter { v: p.v, x: p.x });
    }
    Ok(Extraction::build(s, &sg, w, ElemGen::extra(k, p), V0_DEFECT_BOUND))
}

/// Payload of the defect transvection, computed from the five pieces without building words.
pub fn v0_defect_payload(s: &OddQuadSpace, sg: &Sig, v0: &[RingElem], j: Idx) -> Result<HElem> {
    let r = s.ring();
    let h = s.v0();
    let x = s.lift_x(v0).ok_or_else(|| OdduError::PayloadUnavailable(v0.to_vec()))?;
    let xi = HElem::new(v0.to_vec(), x);
    let rho = sg.conj(s, &[ElemGen::extra(-j, xi.clone())]);
    let q = |sg: &Sig, i: Idx| s.q0(&sg.m.column(s.pos(i)));
    let cx = r.mul(s.eps(-j), r.bar(x));
    let pieces = [
        q(&rho, j),
        h.haction(&q(sg, j), r.neg(1)),
        h.haction(&q(sg, -j), cx),
        h.haction(&xi, r.neg(r.mul(cx, sg.e(s, j, -j)))),
        h.haction(&xi, Atom::ZeroColumn(v0.to_vec(), j).value(s, sg)),
    ];
    Ok(pieces.iter().fold(HElem::zero(s.rank()), |acc, p| h.hplus(&acc, p)))
}

/// Scalars generating the level ideal: off-diagonal entries, diagonal differences and the
/// V₀ blocks paired with V₀^ev generators.
pub fn level_scalars(s: &OddQuadSpace, sg: &Sig) -> Vec<(Atom, RingElem)> {
    let mut out = Vec::new();
    let th = s.theta();
    for &i in &th {
        for &j in &th {
            if i != j && i != -j {
                out.push(Atom::Entry(i, j));
            }
        }
    }
    for &i in &th {
        out.push(Atom::AntiDiag(i));
    }
    for (a, &i) in th.iter().enumerate() {
        for &j in &th[a + 1..] {
            if i != -j {
                out.push(Atom::DiagDiff(i, j));
            }
        }
    }
    for &i in th.iter().filter(|&&i| i > 0) {
        out.push(Atom::DiagDiffOpp(i));
    }
    for v0 in s.even_generators() {
        for &i in &th {
            out.push(Atom::ZeroColumn(v0.clone(), i));
            out.push(Atom::ZeroRow(v0.clone(), i));
        }
    }
    out.into_iter().map(|a| {
        let v = a.value(s, sg);
        (a, v)
    }).collect()
}

/// Seeds of the relative form parameter: Q⁰(σe_j) and the defect payloads.
pub fn level_payloads(s: &OddQuadSpace, sg: &Sig) -> Result<Vec<HElem>> {
    let mut out: Vec<HElem> = s.theta().iter().map(|&j| s.q0(&sg.m.column(s.pos(j)))).collect();
    for v0 in s.even_generators() {
        for &j in &s.theta() {
            out.push(v0_defect_payload(s, sg, &v0, j)?);
        }
    }
    Ok(out)
}

/// The level (I, 𝔐₀) of the E-normal closure of σ.
pub fn level_of(s: &OddQuadSpace, sigma: &UElem) -> Result<OddFormIdeal> {
    let sg = prepare(s, sigma)?;
    let vals: Vec<RingElem> = level_scalars(s, &sg).into_iter().map(|(_, v)| v).collect();
    let ideal = ideal_generated(s.ring(), &vals);
    close_relative(s, ideal, &level_payloads(s, &sg)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateChecks {
    pub extraction: bool,
    pub normalizer: bool,
    pub cu_max: bool,
    pub lemcu: bool,
    pub full_congruence: bool,
}

impl CertificateChecks {
    pub fn all(&self) -> bool {
        self.extraction && self.normalizer && self.cu_max && self.lemcu && self.full_congruence
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WordSummary {
    pub target: String,
    pub length: usize,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub level: OddFormIdeal,
    pub checks: CertificateChecks,
    pub words: Vec<WordSummary>,
}

enum Job {
    Linear(Atom),
    Q0(Idx),
    Defect(Vec<RingElem>, Idx),
}

/// Lower bound: every level generator is realized as a verified word of σ-conjugates whose
/// target is 𝔍₀-elementary. Upper bound: σ normalizes 𝔍₀ and lies in CU(𝔍₀).
pub fn sandwich_certificate(s: &OddQuadSpace, sigma: &UElem) -> Result<Certificate> {
    let sg = prepare(s, sigma)?;
    let level = level_of(s, sigma)?;
    let mut jobs: Vec<Job> = level_scalars(s, &sg).into_iter().map(|(a, _)| Job::Linear(a)).collect();
    jobs.extend(s.theta().into_iter().map(Job::Q0));
    for v0 in s.even_generators() {
        jobs.extend(s.theta().into_iter().map(|j| Job::Defect(v0.clone(), j)));
    }
    let results: Vec<Result<(WordSummary, ElemGen)>> = jobs
        .par_iter()
        .map(|job| {
            let (w, g, bound) = match job {
                Job::Linear(a) => {
                    let w = linear::realize(s, &sg, a, 1, 1, -2)?;
                    (w, ElemGen::short(1, -2, a.value(s, &sg)), 160 * a.cost_units())
                }
                Job::Q0(j) => {
                    let (w, p) = quad::q0_word(s, &sg, *j, 1, 1)?;
                    (w, ElemGen::extra(1, p), Q0_BOUND)
                }
                Job::Defect(v0, j) => {
                    let (w, p, _) = quad::v0_defect_word(s, &sg, v0, *j, 1)?;
                    (w, ElemGen::extra(1, p), V0_DEFECT_BOUND)
                }
            };
            let verified = w.len() <= bound && sg.eval(s, &w) == gen_mat(s, &g);
            Ok((WordSummary { target: g.to_string(), length: w.len(), verified }, g))
        })
        .collect();
    let mut words = Vec::with_capacity(results.len());
    let mut extraction = true;
    for res in results {
        let (summary, g) = res?;
        extraction &= summary.verified && level.is_elementary(s, &g);
        words.push(summary);
    }
    let checks = CertificateChecks {
        extraction,
        normalizer: in_normalizer(s, sigma, &level)?,
        cu_max: in_cu_max(s, sigma, level.ideal)?,
        lemcu: lemcu_hypotheses(s, sigma, &level)?,
        full_congruence: in_full_congruence(s, sigma, &level)?,
    };
    Ok(Certificate { level, checks, words })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{mul, random_unitary};
    use crate::heisenberg::AHSpace;
    use crate::ideals::mmin;
    use crate::ring::{Ideal, PseudoRing};
    use crate::transvections::gen_matrix;

    fn space(m: u64, lam: u64, rank2: bool) -> OddQuadSpace {
        let ring = PseudoRing::new(m, lam).unwrap();
        let v0 = if rank2 {
            AHSpace::new(ring, vec![vec![0, 1], vec![(m - lam) as i64, 0]]).unwrap()
        } else {
            AHSpace::zero_rank(ring)
        };
        OddQuadSpace::with_lmax(3, v0).unwrap()
    }

    #[test]
    fn identity_steps_are_trivial() {
        let s = space(5, 1, false);
        let id = UElem::identity(&s);
        for step in 1..=3u8 {
            let e = extract_step(&s, &id, step, 3).unwrap();
            assert!(e.verified);
            assert_eq!(e.length, STEP_LENGTHS[step as usize - 1]);
            assert_eq!(e.generator, match step {
                1 => ElemGen::short(-2, 3, 0),
                2 => ElemGen::short(-1, 2, 0),
                _ => ElemGen::short(1, 2, 0),
            });
        }
    }

    #[test]
    fn step_one_example() {
        let s = space(5, 1, false);
        let sigma = mul(&s, &gen_matrix(&s, &ElemGen::short(2, 3, 1)).unwrap(), &gen_matrix(&s, &ElemGen::short(2, 1, 1)).unwrap());
        let e = extract_step(&s, &sigma, 1, 1).unwrap();
        assert!(e.verified);
        assert_eq!(e.generator, ElemGen::short(-2, 3, 1));
    }

    #[test]
    fn entry_example() {
        let s = space(6, 1, false);
        let sigma = gen_matrix(&s, &ElemGen::short(2, 3, 5)).unwrap();
        let e = extract_linear(&s, &sigma, &LinearKind::Entry { i: 2, j: 3 }, 1, -2, 1).unwrap();
        assert!(e.verified);
        assert_eq!(e.generator, ElemGen::short(1, -2, 5));
        assert_eq!(e.length, 160);
    }

    #[test]
    fn linear_kinds_random() {
        let s = space(8, 3, true);
        let v0 = s.even_generators()[0].clone();
        let kinds = [
            LinearKind::Entry { i: -1, j: 3 },
            LinearKind::AntiDiag { i: 2 },
            LinearKind::ZeroColumn { v0: v0.clone(), i: -3 },
            LinearKind::ZeroRow { v0, j: 1 },
            LinearKind::DiagDiff { i: 1, j: -2 },
            LinearKind::DiagDiffOpp { i: 3 },
        ];
        for (t, kind) in kinds.iter().enumerate() {
            let sigma = random_unitary(&s, 40 + t as u64, 12);
            let e = extract_linear(&s, &sigma, kind, 2, -3, 3).unwrap();
            assert!(e.verified, "{kind:?}");
            assert!(e.length <= kind.bound());
        }
    }

    #[test]
    fn q0_extra_transvection_example() {
        let s = space(6, 1, true);
        let xi = HElem::new(vec![1, 2], s.lift_x(&[1, 2]).unwrap());
        let sigma = gen_matrix(&s, &ElemGen::extra(-1, xi.clone())).unwrap();
        let e = extract_q0(&s, &sigma, 1, 2).unwrap();
        assert!(e.verified);
        let neg_v: Vec<RingElem> = xi.v.iter().map(|&c| s.ring().neg(c)).collect();
        assert_eq!(e.generator, ElemGen::extra(2, HElem::new(neg_v, xi.x)));
        assert!(e.length <= Q0_BOUND);
    }

    #[test]
    fn v0_defect_random_and_payload_shortcut() {
        let s = space(8, 3, true);
        let v0 = s.even_generators()[0].clone();
        let sigma = random_unitary(&s, 9, 15);
        let e = extract_v0_defect(&s, &sigma, &v0, -2, 3).unwrap();
        assert!(e.verified);
        let sg = Sig::new(&s, sigma.mat().clone()).unwrap();
        let ElemGen::Extra { p, .. } = &e.generator else { panic!() };
        assert_eq!(*p, v0_defect_payload(&s, &sg, &v0, -2).unwrap());
    }

    #[test]
    fn level_examples() {
        let s = space(4, 1, false);
        let id = UElem::identity(&s);
        let j0 = level_of(&s, &id).unwrap();
        assert_eq!(j0.ideal, Ideal::zero(s.ring()));
        assert_eq!(j0.m0, mmin(&s, j0.ideal));
        let t = gen_matrix(&s, &ElemGen::short(1, 2, 2)).unwrap();
        let j1 = level_of(&s, &t).unwrap();
        assert_eq!(j1.ideal, Ideal::principal(s.ring(), 2));
        assert_eq!(j1.m0, mmin(&s, j1.ideal));
    }

    #[test]
    fn wrong_rank_rejected() {
        let ring = PseudoRing::new(5, 1).unwrap();
        let s = OddQuadSpace::with_lmax(2, AHSpace::zero_rank(ring)).unwrap();
        let id = UElem::identity(&s);
        assert_eq!(extract_step(&s, &id, 1, 1).unwrap_err(), OdduError::WrongRank(2));
    }

    #[test]
    fn certificate_small() {
        let s = space(4, 1, false);
        let sigma = random_unitary(&s, 3, 8);
        let c = sandwich_certificate(&s, &sigma).unwrap();
        assert!(c.checks.all(), "{:?}", c.checks);
    }
}
