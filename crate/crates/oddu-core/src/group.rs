//! Odd unitary group elements: membership, block views, products, random elements.

use crate::error::{OdduError, Result};
use crate::heisenberg::{all_vectors, HElem};
use crate::matrix::Mat;
use crate::quadratic::{Idx, OddQuadSpace};
use crate::ring::RingElem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// An invertible matrix in canonical basis order. Unitarity is a separate predicate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UElem {
    mat: Mat,
}

impl UElem {
    pub fn new(s: &OddQuadSpace, mat: Mat) -> Result<Self> {
        if mat.dim() != s.dim() {
            return Err(OdduError::DimensionMismatch { expected: s.dim(), got: mat.dim() });
        }
        mat.inverse(s.ring())?;
        Ok(UElem { mat })
    }

    /// Wraps a matrix already known to be invertible.
    pub fn from_mat_unchecked(mat: Mat) -> Self {
        UElem { mat }
    }

    pub fn identity(s: &OddQuadSpace) -> Self {
        UElem { mat: Mat::identity(s.dim()) }
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn into_mat(self) -> Mat {
        self.mat
    }

    /// σ_ij = (σ e_j)_i
    pub fn entry(&self, s: &OddQuadSpace, i: Idx, j: Idx) -> RingElem {
        self.mat.get(s.pos(i), s.pos(j))
    }

    pub fn apply(&self, s: &OddQuadSpace, v: &[RingElem]) -> Vec<RingElem> {
        self.mat.mul_vec(s.ring(), v)
    }

    /// σ e_i
    pub fn col(&self, s: &OddQuadSpace, i: Idx) -> Vec<RingElem> {
        self.mat.column(s.pos(i))
    }

    /// σ^{h0} e_j: the V₀ part of σ e_j.
    pub fn h0(&self, s: &OddQuadSpace, j: Idx) -> Vec<RingElem> {
        let c = self.col(s, j);
        s.v0_part(&c).to_vec()
    }

    /// (σ^{0h} v₀)_i
    pub fn oh(&self, s: &OddQuadSpace, v0: &[RingElem], i: Idx) -> RingElem {
        let w = self.apply(s, &s.from_v0(v0));
        w[s.pos(i)]
    }

    /// σ^{00} v₀
    pub fn oo(&self, s: &OddQuadSpace, v0: &[RingElem]) -> Vec<RingElem> {
        let w = self.apply(s, &s.from_v0(v0));
        s.v0_part(&w).to_vec()
    }
}

pub fn mul(s: &OddQuadSpace, a: &UElem, b: &UElem) -> UElem {
    UElem { mat: a.mat.mul(s.ring(), &b.mat) }
}

pub fn inv(s: &OddQuadSpace, a: &UElem) -> Result<UElem> {
    Ok(UElem { mat: a.mat.inverse(s.ring())? })
}

/// ^t a = t·a·t⁻¹
pub fn conj(s: &OddQuadSpace, t: &UElem, a: &UElem) -> Result<UElem> {
    Ok(mul(s, &mul(s, t, a), &inv(s, t)?))
}

/// [a,b] = a·b·a⁻¹·b⁻¹
pub fn comm(s: &OddQuadSpace, a: &UElem, b: &UElem) -> Result<UElem> {
    let ab = mul(s, a, b);
    Ok(mul(s, &mul(s, &ab, &inv(s, a)?), &inv(s, b)?))
}

/// The four blocks of σ in canonical layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Blocks {
    pub hh: Vec<Vec<RingElem>>,
    pub h0: Vec<Vec<RingElem>>,
    pub oh: Vec<Vec<RingElem>>,
    pub oo: Vec<Vec<RingElem>>,
}

pub fn blocks(s: &OddQuadSpace, sigma: &UElem) -> Blocks {
    let h = 2 * s.n();
    let d = s.dim();
    let sub = |rs: std::ops::Range<usize>, cs: std::ops::Range<usize>| -> Vec<Vec<RingElem>> {
        rs.map(|r| cs.clone().map(|c| sigma.mat.get(r, c)).collect()).collect()
    };
    Blocks { hh: sub(0..h, 0..h), h0: sub(h..d, 0..h), oh: sub(0..h, h..d), oo: sub(h..d, h..d) }
}

/// The condition of the block membership criterion that fails first, numbered (i)–(vi).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum UnitaryCondition {
    AdjointHH,
    AdjointOH,
    AdjointHO,
    AdjointOO,
    QuadraticBasis,
    QuadraticV0,
}

impl UnitaryCondition {
    pub fn label(&self) -> &'static str {
        match self {
            UnitaryCondition::AdjointHH => "(i)",
            UnitaryCondition::AdjointOH => "(ii)",
            UnitaryCondition::AdjointHO => "(iii)",
            UnitaryCondition::AdjointOO => "(iv)",
            UnitaryCondition::QuadraticBasis => "(v)",
            UnitaryCondition::QuadraticV0 => "(vi)",
        }
    }
}

/// First failing condition of the block criterion, or None when σ is unitary.
/// (ii)–(iv) and (vi) are evaluated on the V₀ basis.
pub fn unitary_failure(s: &OddQuadSpace, sigma: &UElem) -> Result<Option<UnitaryCondition>> {
    let r = s.ring();
    let h = s.v0();
    let t = inv(s, sigma)?;
    let th = s.theta();
    // (i) σ̃_ij = −ε_i·bar(σ_{−j,−i})·ε_{−j}
    for &i in &th {
        for &j in &th {
            let rhs = r.neg(r.mul(r.mul(s.eps(i), r.bar(sigma.entry(s, -j, -i))), s.eps(-j)));
            if t.entry(s, i, j) != rhs {
                return Ok(Some(UnitaryCondition::AdjointHH));
            }
        }
    }
    let rank = s.rank();
    let basis: Vec<Vec<RingElem>> = (0..rank)
        .map(|k| {
            let mut v = vec![0; rank];
            v[k] = 1;
            v
        })
        .collect();
    // (ii) (σ̃^{0h} v₀)_i = −ε_i·B₀(σ^{h0} e₋ᵢ, v₀)
    for v0 in &basis {
        for &i in &th {
            let rhs = r.neg(r.mul(s.eps(i), h.b(&sigma.h0(s, -i), v0)));
            if t.oh(s, v0, i) != rhs {
                return Ok(Some(UnitaryCondition::AdjointOH));
            }
        }
    }
    // (iii) B₀(v₀, σ̃^{h0} e_i) = bar((σ v₀)₋ᵢ)·ε₋ᵢ
    for v0 in &basis {
        for &i in &th {
            let rhs = r.mul(r.bar(sigma.oh(s, v0, -i)), s.eps(-i));
            if h.b(v0, &t.h0(s, i)) != rhs {
                return Ok(Some(UnitaryCondition::AdjointHO));
            }
        }
    }
    // (iv) B₀(v₀, σ̃^{00} w₀) = B₀(σ^{00} v₀, w₀)
    for v0 in &basis {
        for w0 in &basis {
            if h.b(v0, &t.oo(s, w0)) != h.b(&sigma.oo(s, v0), w0) {
                return Ok(Some(UnitaryCondition::AdjointOO));
            }
        }
    }
    // (v) Q⁰(σ e_i) ∈ 𝔏₀
    for &i in &th {
        if !s.in_l0(&s.q0(&sigma.col(s, i))) {
            return Ok(Some(UnitaryCondition::QuadraticBasis));
        }
    }
    // (vi) Q⁰(σ f_k) ⊖ Q⁰(f_k) ∈ 𝔏₀
    for v0 in &basis {
        let img = sigma.apply(s, &s.from_v0(v0));
        if !s.in_l0(&h.hminus(&s.q0(&img), &HElem::new(v0.clone(), 0))) {
            return Ok(Some(UnitaryCondition::QuadraticV0));
        }
    }
    Ok(None)
}

pub fn is_unitary(s: &OddQuadSpace, sigma: &UElem) -> Result<bool> {
    Ok(unitary_failure(s, sigma)?.is_none())
}

/// Default enumeration bound for the brute-force check: (2n+r)·log₂ m.
pub const BRUTE_FORCE_BITS: f64 = 16.0;

/// Unitarity by enumerating V: B(σv,σw) = B(v,w) for every v (all w at once through the
/// row vector of the difference form) and Q(σv) ⊖ Q(v) ∈ 𝔏 via the sum definition of 𝔏.
pub fn brute_force_is_unitary(s: &OddQuadSpace, sigma: &UElem) -> Result<bool> {
    let bits = s.dim() as f64 * (s.ring().modulus() as f64).log2();
    if bits > BRUTE_FORCE_BITS {
        return Err(OdduError::SpaceTooLarge(format!("{bits:.1} bits")));
    }
    if sigma.mat.dim() != s.dim() {
        return Err(OdduError::DimensionMismatch { expected: s.dim(), got: sigma.mat.dim() });
    }
    sigma.mat.inverse(s.ring())?;
    let r = s.ring();
    let d = s.dim();
    let basis: Vec<Vec<RingElem>> = (0..d)
        .map(|k| {
            let mut v = vec![0; d];
            v[k] = 1;
            v
        })
        .collect();
    let images: Vec<Vec<RingElem>> = basis.iter().map(|b| sigma.apply(s, b)).collect();
    for v in all_vectors(r.modulus(), d) {
        let sv = sigma.apply(s, &v);
        for (b, sb) in basis.iter().zip(&images) {
            if s.big_b(&sv, sb) != s.big_b(&v, b) {
                return Ok(false);
            }
        }
        let (diff, x) = s.q_diff(&sv, &v);
        if !s.in_big_l_by_definition(&diff, x) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Hyperbolic diagonal: e_i ↦ e_i·u, e₋ᵢ ↦ e₋ᵢ·bar(1)·inv(bar u), identity elsewhere (i > 0).
pub fn hyperbolic_diag(s: &OddQuadSpace, i: Idx, u: RingElem) -> Result<UElem> {
    let r = s.ring();
    let ubar_inv = r.inv(r.bar(u))?;
    let mut m = Mat::identity(s.dim());
    m.set(s.pos(i), s.pos(i), u % r.modulus());
    m.set(s.pos(-i), s.pos(-i), r.mul(r.bar(1), ubar_inv));
    Ok(UElem { mat: m })
}

/// Deterministic product of `length` random factors: elementary transvections with valid
/// parameters (60% short, 25% extra short) or hyperbolic diagonal units.
pub fn random_unitary(s: &OddQuadSpace, seed: u64, length: usize) -> UElem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_unitary_with(s, &mut rng, length)
}

pub fn random_unitary_with<R: Rng>(s: &OddQuadSpace, rng: &mut R, length: usize) -> UElem {
    use crate::transvections::{gen_delta, random_gen};
    let r = s.ring();
    let units = r.units();
    let mut m = Mat::identity(s.dim());
    for _ in 0..length {
        if rng.gen_bool(0.85) {
            let short = rng.gen_bool(60.0 / 85.0);
            let g = random_gen(s, rng, short);
            m.right_apply(r, &gen_delta(s, &g));
        } else {
            let i = rng.gen_range(1..=s.n() as Idx);
            let u = units[rng.gen_range(0..units.len())];
            let dmat = hyperbolic_diag(s, i, u).expect("unit");
            m = m.mul(r, &dmat.mat);
        }
    }
    UElem { mat: m }
}
