use oddu_core::extraction::{extract_linear, level_of, ConjWord, LinearKind};
use oddu_core::group::{brute_force_is_unitary, comm, conj, inv, is_unitary, mul, random_unitary, UElem};
use oddu_core::ideals::{act_ideal, in_normalizer};
use oddu_core::quadratic::OddQuadSpace;
use oddu_core::selftest::{desk_space, symplectic_gram};
use oddu_core::transvections::relations::q0_transport_holds;
use oddu_core::transvections::{gen_mat, random_word, word_mat};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spaces() -> Vec<OddQuadSpace> {
    vec![
        desk_space(4, 1, vec![]),
        desk_space(5, 1, symplectic_gram(5, 1)),
        desk_space(6, 1, symplectic_gram(6, 1)),
        desk_space(8, 3, symplectic_gram(8, 3)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn products_of_generators_preserve_the_form(k in 0usize..4, seed: u64, len in 1usize..20) {
        let s = &spaces()[k];
        let sigma = random_unitary(s, seed, len);
        prop_assert!(is_unitary(s, &sigma).unwrap());
        let mut g = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a);
        let v: Vec<u64> = (0..s.dim()).map(|_| rand::Rng::gen_range(&mut g, 0..s.ring().modulus())).collect();
        let w: Vec<u64> = (0..s.dim()).map(|_| rand::Rng::gen_range(&mut g, 0..s.ring().modulus())).collect();
        prop_assert_eq!(s.big_b(&sigma.apply(s, &v), &sigma.apply(s, &w)), s.big_b(&v, &w));
    }

    #[test]
    fn block_criterion_matches_brute_force(m in 2u64..4, seed: u64, len in 0usize..8) {
        let s = desk_space(m, 1, vec![vec![0]]);
        let sigma = random_unitary(&s, seed, len);
        prop_assert!(brute_force_is_unitary(&s, &sigma).unwrap());
        prop_assert!(is_unitary(&s, &sigma).unwrap());
    }

    #[test]
    fn conjugated_words_keep_length_and_value(k in 0usize..4, seed: u64, wlen in 0usize..5, elen in 1usize..4) {
        let s = &spaces()[k];
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let sigma = random_unitary(s, seed.wrapping_add(1), 8);
        let w = ConjWord::random(s, &mut g, wlen, 3);
        let eps = random_word(s, &mut g, elen);
        let e = UElem::from_mat_unchecked(word_mat(s, &eps));
        let base = w.evaluate_unchecked(s, &sigma).unwrap();
        let cw = w.conjugated(&eps);
        let kw = ConjWord::comm_gw(s, &eps, &w);
        prop_assert_eq!(cw.len(), w.len());
        prop_assert_eq!(kw.len(), 2 * w.len());
        prop_assert_eq!(cw.evaluate_unchecked(s, &sigma).unwrap(), conj(s, &e, &base).unwrap());
        prop_assert_eq!(kw.evaluate_unchecked(s, &sigma).unwrap(), comm(s, &e, &base).unwrap());
    }

    #[test]
    fn permutation_transport_of_q0(k in 0usize..4, seed: u64, a in 0usize..6, b in 0usize..6) {
        let s = &spaces()[k];
        let th = s.theta();
        let (i, j) = (th[a], th[b]);
        prop_assume!(i != j && i != -j);
        let sigma = random_unitary(s, seed, 12);
        prop_assert!(q0_transport_holds(s, &sigma, i, j));
    }

    #[test]
    fn ideal_action_is_a_group_action(seed: u64, lam in prop::sample::select(vec![1u64, 3])) {
        let s = desk_space(4, lam, vec![]);
        let sigma = random_unitary(&s, seed, 6);
        let tau = random_unitary(&s, seed.wrapping_mul(31).wrapping_add(7), 6);
        let j0 = level_of(&s, &random_unitary(&s, seed ^ 0xabc, 4)).unwrap();
        let lhs = act_ideal(&s, &mul(&s, &sigma, &tau), &j0).unwrap();
        let rhs = act_ideal(&s, &sigma, &act_ideal(&s, &tau, &j0).unwrap()).unwrap();
        prop_assert_eq!(lhs.m0, rhs.m0);
        let back = act_ideal(&s, &inv(&s, &sigma).unwrap(), &act_ideal(&s, &sigma, &j0).unwrap()).unwrap();
        prop_assert_eq!(back.m0, j0.m0);
    }

    #[test]
    fn level_is_normalized(seed: u64) {
        let s = desk_space(4, 1, vec![]);
        let sigma = random_unitary(&s, seed, 5);
        let j0 = level_of(&s, &sigma).unwrap();
        prop_assert!(in_normalizer(&s, &sigma, &j0).unwrap());
    }

    #[test]
    fn entry_words_evaluate_to_their_targets(k in 1usize..4, seed: u64, a in 0usize..6, b in 0usize..6, c in 0u64..8) {
        let s = &spaces()[k];
        let th = s.theta();
        let (i, j) = (th[a], th[b]);
        prop_assume!(i != j && i != -j);
        let sigma = random_unitary(s, seed, 10);
        let ex = extract_linear(s, &sigma, &LinearKind::Entry { i, j }, 1, -2, c).unwrap();
        prop_assert!(ex.verified);
        prop_assert!(ex.length <= 160);
        let value = ex.word.evaluate_unchecked(s, &sigma).unwrap();
        prop_assert_eq!(value.mat(), &gen_mat(s, &ex.generator));
    }
}
