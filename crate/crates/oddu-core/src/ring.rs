//! Z/m with the pseudoinvolution x ↦ λx, plus principal ideals.

use crate::error::{OdduError, Result};
use serde::{Deserialize, Serialize};

/// Residues are stored reduced into `[0, m)`.
pub type RingElem = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PseudoRing {
    modulus: u64,
    lambda: u64,
}

/// Largest modulus accepted; keeps every product of two residues inside u64.
pub const MAX_MODULUS: u64 = 1 << 31;

impl PseudoRing {
    /// Builds Z/m with bar(x) = λx. All pseudoinvolution axioms are checked by a full scan.
    pub fn new(modulus: u64, lambda: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(OdduError::ModulusTooSmall(modulus));
        }
        if modulus > MAX_MODULUS {
            return Err(OdduError::Config(format!("modulus {modulus} exceeds {MAX_MODULUS}")));
        }
        let ring = PseudoRing { modulus, lambda: lambda % modulus };
        if ring.mul(ring.lambda, ring.lambda) != 1 % modulus {
            return Err(OdduError::NotPseudoinvolution { modulus, lambda });
        }
        if modulus <= 64 {
            ring.check_axioms()?;
        }
        Ok(ring)
    }

    fn check_axioms(&self) -> Result<()> {
        let b1i = self.bar_one_inv();
        for x in self.elements() {
            if self.bar(self.bar(x)) != x {
                return Err(OdduError::NotPseudoinvolution { modulus: self.modulus, lambda: self.lambda });
            }
            for y in self.elements() {
                let lhs = self.bar(self.mul(x, y));
                let rhs = self.mul(self.mul(self.bar(y), b1i), self.bar(x));
                if lhs != rhs || self.bar(self.add(x, y)) != self.add(self.bar(x), self.bar(y)) {
                    return Err(OdduError::NotPseudoinvolution { modulus: self.modulus, lambda: self.lambda });
                }
            }
        }
        Ok(())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElem> {
        0..self.modulus
    }

    pub fn units(&self) -> Vec<RingElem> {
        self.elements().filter(|&x| gcd(x, self.modulus) == 1).collect()
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> RingElem {
        x.rem_euclid(self.modulus as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: RingElem, b: RingElem) -> RingElem {
        (a + b) % self.modulus
    }

    #[inline]
    pub fn sub(&self, a: RingElem, b: RingElem) -> RingElem {
        (a + self.modulus - b) % self.modulus
    }

    #[inline]
    pub fn neg(&self, a: RingElem) -> RingElem {
        (self.modulus - a) % self.modulus
    }

    #[inline]
    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        (a * b) % self.modulus
    }

    pub fn mul_all(&self, xs: &[RingElem]) -> RingElem {
        xs.iter().fold(1 % self.modulus, |acc, &x| self.mul(acc, x))
    }

    #[inline]
    pub fn bar(&self, x: RingElem) -> RingElem {
        self.mul(self.lambda, x)
    }

    /// inv(bar(1)), which is λ itself because λ² = 1.
    #[inline]
    pub fn bar_one_inv(&self) -> RingElem {
        self.lambda
    }

    pub fn is_unit(&self, x: RingElem) -> bool {
        gcd(x % self.modulus, self.modulus) == 1
    }

    pub fn inv(&self, x: RingElem) -> Result<RingElem> {
        let (g, s, _) = ext_gcd(x as i64 % self.modulus as i64, self.modulus as i64);
        if g != 1 {
            return Err(OdduError::NotAUnit { value: x, modulus: self.modulus });
        }
        Ok(self.reduce(s))
    }

    /// x + bar(x)
    pub fn trace_sym(&self, x: RingElem) -> RingElem {
        self.add(x, self.bar(x))
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Returns (g, s, t) with s·a + t·b = g = gcd(a, b) ≥ 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// A principal ideal dZ/m stored by its canonical generator d | m. The zero ideal has d = m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ideal {
    generator: u64,
}

impl Ideal {
    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Builds the ideal generated by d, canonicalized to gcd(d, m).
    pub fn principal(ring: &PseudoRing, d: u64) -> Ideal {
        Ideal { generator: gcd(d % ring.modulus(), ring.modulus()) }
    }

    pub fn zero(ring: &PseudoRing) -> Ideal {
        Ideal { generator: ring.modulus() }
    }

    pub fn whole() -> Ideal {
        Ideal { generator: 1 }
    }

    pub fn is_zero(&self, ring: &PseudoRing) -> bool {
        self.generator == ring.modulus()
    }

    pub fn contains(&self, x: RingElem) -> bool {
        x % self.generator == 0
    }

    pub fn elements(&self, ring: &PseudoRing) -> Vec<RingElem> {
        (0..ring.modulus()).step_by(self.generator as usize).collect()
    }

    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        self.generator % other.generator == 0
    }

    /// Every ideal of Z/m, ordered by generator.
    pub fn all(ring: &PseudoRing) -> Vec<Ideal> {
        (1..=ring.modulus())
            .filter(|d| ring.modulus() % d == 0)
            .map(|d| Ideal { generator: d })
            .collect()
    }
}

/// I(x₁,…,xₙ): generator gcd(xs ∪ {m}).
pub fn ideal_generated(ring: &PseudoRing, xs: &[RingElem]) -> Ideal {
    let g = xs.iter().fold(ring.modulus(), |acc, &x| gcd(acc, x % ring.modulus()));
    Ideal { generator: g }
}

/// Finds coefficients c with Σ cᵢ·gsᵢ ≡ t (mod m), if t lies in I(gs).
pub fn solve_combination(ring: &PseudoRing, gs: &[RingElem], t: RingElem) -> Option<Vec<RingElem>> {
    let m = ring.modulus() as i64;
    // invariant: g ≡ Σ coeffs·gs (mod m)
    let mut g = m;
    let mut coeffs = vec![0i64; gs.len()];
    for (idx, &gv) in gs.iter().enumerate() {
        let (d, s, t2) = ext_gcd(g, gv as i64 % m);
        for c in coeffs.iter_mut() {
            *c = (*c * s).rem_euclid(m);
        }
        coeffs[idx] = (coeffs[idx] + t2).rem_euclid(m);
        g = d;
    }
    let t = (t as i64).rem_euclid(m);
    if t % g != 0 {
        return None;
    }
    let f = t / g;
    Some(coeffs.into_iter().map(|c| ((c * f).rem_euclid(m)) as u64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn make_ring_examples() {
        assert!(PseudoRing::new(5, 1).is_ok());
        assert!(PseudoRing::new(8, 3).is_ok());
        assert_eq!(
            PseudoRing::new(8, 2),
            Err(OdduError::NotPseudoinvolution { modulus: 8, lambda: 2 })
        );
        assert_eq!(PseudoRing::new(1, 0), Err(OdduError::ModulusTooSmall(1)));
    }

    #[test]
    fn bar_examples() {
        assert_eq!(PseudoRing::new(5, 1).unwrap().bar(3), 3);
        assert_eq!(PseudoRing::new(5, 4).unwrap().bar(2), 3);
        assert_eq!(PseudoRing::new(8, 3).unwrap().bar(2), 6);
    }

    #[test]
    fn inv_examples() {
        assert_eq!(PseudoRing::new(5, 1).unwrap().inv(1), Ok(1));
        let z8 = PseudoRing::new(8, 3).unwrap();
        assert_eq!(z8.inv(3), Ok(3));
        assert!(matches!(z8.inv(2), Err(OdduError::NotAUnit { .. })));
    }

    #[test]
    fn ideal_examples() {
        let z8 = PseudoRing::new(8, 3).unwrap();
        assert!(ideal_generated(&z8, &[]).is_zero(&z8));
        assert_eq!(ideal_generated(&z8, &[6, 4]).generator(), 2);
        let z5 = PseudoRing::new(5, 1).unwrap();
        assert_eq!(ideal_generated(&z5, &[2]).generator(), 1);
    }

    #[test]
    fn axioms_exhaustive_on_small_rings() {
        for (m, l) in [(4, 1), (4, 3), (5, 4), (6, 5), (8, 3), (8, 5), (8, 7), (9, 8)] {
            let r = PseudoRing::new(m, l).unwrap();
            for x in r.elements() {
                for y in r.elements() {
                    assert_eq!(r.bar(r.add(x, y)), r.add(r.bar(x), r.bar(y)));
                    assert_eq!(r.bar(r.mul(x, y)), r.mul(r.mul(r.bar(y), r.bar_one_inv()), r.bar(x)));
                }
                assert_eq!(r.bar(r.bar(x)), x);
            }
        }
    }

    #[test]
    fn every_ideal_is_bar_stable() {
        let r = PseudoRing::new(8, 3).unwrap();
        for i in Ideal::all(&r) {
            for x in i.elements(&r) {
                assert!(i.contains(r.bar(x)));
            }
        }
    }

    proptest! {
        #[test]
        fn inverse_roundtrip(m in 2u64..200, x in 0u64..200) {
            let r = PseudoRing::new(m, 1).unwrap();
            if let Ok(y) = r.inv(x % m) {
                prop_assert_eq!(r.mul(x % m, y), 1 % m);
            }
        }

        #[test]
        fn ideal_generation_is_order_independent_and_idempotent(xs in proptest::collection::vec(0u64..24, 0..5)) {
            let r = PseudoRing::new(24, 1).unwrap();
            let i = ideal_generated(&r, &xs);
            let mut rev = xs.clone();
            rev.reverse();
            prop_assert_eq!(i, ideal_generated(&r, &rev));
            prop_assert_eq!(i, ideal_generated(&r, &i.elements(&r)));
        }

        #[test]
        fn combination_solver_hits_target(gs in proptest::collection::vec(0u64..36, 1..4), t in 0u64..36) {
            let r = PseudoRing::new(36, 1).unwrap();
            let ideal = ideal_generated(&r, &gs);
            match solve_combination(&r, &gs, t) {
                Some(cs) => {
                    let s = gs.iter().zip(&cs).fold(0, |acc, (&g, &c)| r.add(acc, r.mul(g, c)));
                    prop_assert_eq!(s, t);
                }
                None => prop_assert!(!ideal.contains(t)),
            }
        }
    }
}
