//! Words of elementary σ-conjugates, kept symbolic until evaluated.

use crate::error::{OdduError, Result};
use crate::group::{inv, is_unitary, UElem};
use crate::matrix::Mat;
use crate::quadratic::OddQuadSpace;
use crate::transvections::{gen_delta, random_word, ElemGen};
use rand::Rng;
use serde::Serialize;

/// ^ε σ^{exp} with ε the product of `conj`, outermost generator first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjFactor {
    pub conj: Vec<ElemGen>,
    pub exp: i8,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConjWord {
    pub factors: Vec<ConjFactor>,
}

impl ConjWord {
    pub fn empty() -> Self {
        ConjWord { factors: Vec::new() }
    }

    /// The word σ itself.
    pub fn sigma() -> Self {
        ConjWord { factors: vec![ConjFactor { conj: Vec::new(), exp: 1 }] }
    }

    pub fn factor(conj: Vec<ElemGen>, exp: i8) -> Self {
        ConjWord { factors: vec![ConjFactor { conj, exp }] }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn append(&mut self, other: ConjWord) {
        self.factors.extend(other.factors);
    }

    pub fn then(mut self, other: ConjWord) -> Self {
        self.append(other);
        self
    }

    /// ^ε W: the generator word ε is prepended to every conjugator. Length is unchanged.
    pub fn conjugated(&self, eps: &[ElemGen]) -> ConjWord {
        if eps.is_empty() {
            return self.clone();
        }
        ConjWord {
            factors: self
                .factors
                .iter()
                .map(|f| {
                    let mut c = eps.to_vec();
                    c.extend(f.conj.iter().cloned());
                    ConjFactor { conj: c, exp: f.exp }
                })
                .collect(),
        }
    }

    pub fn inverse(&self) -> ConjWord {
        ConjWord {
            factors: self.factors.iter().rev().map(|f| ConjFactor { conj: f.conj.clone(), exp: -f.exp }).collect(),
        }
    }

    /// [ε, W] = ^ε W · W⁻¹. Length doubles.
    pub fn comm_gw(_s: &OddQuadSpace, eps: &[ElemGen], w: &ConjWord) -> ConjWord {
        w.conjugated(eps).then(w.inverse())
    }

    /// [W, ε] = W · ^ε(W⁻¹). Length doubles.
    pub fn comm_wg(_s: &OddQuadSpace, w: &ConjWord, eps: &[ElemGen]) -> ConjWord {
        w.clone().then(w.inverse().conjugated(eps))
    }

    /// Replaces every factor ^c σ^{±1} of `self` by ^c Z^{±1}. Valid when Z evaluates to a
    /// word over σ whose value is the element `self` was built for.
    pub fn substitute(&self, z: &ConjWord) -> ConjWord {
        let zi = z.inverse();
        let mut out = ConjWord::empty();
        for f in &self.factors {
            let base = if f.exp > 0 { z } else { &zi };
            out.append(base.conjugated(&f.conj));
        }
        out
    }

    /// Substitution of the single factor ^g σ: a word for ^gσ becomes a word for σ.
    pub fn substitute_conj(&self, g: &[ElemGen]) -> ConjWord {
        self.substitute(&ConjWord::factor(g.to_vec(), 1))
    }

    /// Product of the factors; σ must be unitary.
    pub fn evaluate(&self, s: &OddQuadSpace, sigma: &UElem) -> Result<UElem> {
        if !is_unitary(s, sigma)? {
            return Err(OdduError::NotUnitary);
        }
        self.evaluate_unchecked(s, sigma)
    }

    pub fn evaluate_unchecked(&self, s: &OddQuadSpace, sigma: &UElem) -> Result<UElem> {
        let si = inv(s, sigma)?;
        Ok(UElem::from_mat_unchecked(self.evaluate_with(s, sigma.mat(), si.mat())))
    }

    /// Evaluation with a precomputed inverse.
    pub fn evaluate_with(&self, s: &OddQuadSpace, sigma: &Mat, sigma_inv: &Mat) -> Mat {
        let r = s.ring();
        let mut acc = Mat::identity(s.dim());
        for f in &self.factors {
            let mut m = if f.exp > 0 { sigma.clone() } else { sigma_inv.clone() };
            for g in f.conj.iter().rev() {
                m.left_apply(r, &gen_delta(s, g));
                m.right_apply(r, &gen_delta(s, &g.inverse(s)));
            }
            acc = acc.mul(r, &m);
        }
        acc
    }

    /// A random word with up to `depth` generators in each conjugator.
    pub fn random<R: Rng>(s: &OddQuadSpace, rng: &mut R, len: usize, depth: usize) -> ConjWord {
        ConjWord {
            factors: (0..len)
                .map(|_| {
                    let d = rng.gen_range(0..=depth);
                    ConjFactor { conj: random_word(s, rng, d), exp: if rng.gen_bool(0.5) { 1 } else { -1 } }
                })
                .collect(),
        }
    }
}
