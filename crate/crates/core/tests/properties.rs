use std::collections::BTreeMap;

use bs3_lambda::classifier::{homotopy_equivalent, theorem_reproduction, TheoremConfig};
use bs3_lambda::genus::{primes_between, GenusPoint, KModel, KoModel, ALLOWED_RESIDUES};
use bs3_lambda::poly::{Monomial, MultiPoly};
use bs3_lambda::symfun::{elementary, express_in_elementaries};
use num_bigint::BigInt;
use proptest::prelude::*;

fn poly(nvars: usize, max_exp: u32) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, nvars), -20i64..=20), 0..6)
        .prop_map(MultiPoly::from_terms)
}

fn modded(p: &MultiPoly, m: u64) -> MultiPoly {
    p.reduce_mod(m).unwrap()
}

fn symmetrize3(p: &MultiPoly) -> MultiPoly {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    PERMS.iter().fold(MultiPoly::zero(), |acc, perm| &acc + &p.permute_vars(perm))
}

proptest! {
    #[test]
    fn integer_ring_axioms(a in poly(3, 3), b in poly(3, 3), c in poly(3, 3)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &MultiPoly::one(), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn modular_ring_axioms(a in poly(2, 3), b in poly(2, 3), c in poly(2, 3), m in 2u64..30) {
        let (a, b, c) = (modded(&a, m), modded(&b, m), modded(&c, m));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!(a.terms().all(|(_, v)| *v >= BigInt::from(0) && *v < BigInt::from(m)));
    }

    #[test]
    fn reduction_is_a_ring_homomorphism(a in poly(3, 3), b in poly(3, 3), m in 2u64..50) {
        prop_assert_eq!(modded(&(&a + &b), m), &modded(&a, m) + &modded(&b, m));
        prop_assert_eq!(modded(&(&a * &b), m), &modded(&a, m) * &modded(&b, m));
    }

    #[test]
    fn display_parse_round_trip(a in poly(3, 4), m in prop::option::of(2u64..100)) {
        let a = match m { Some(m) => modded(&a, m), None => a };
        let parsed: MultiPoly = a.to_string().parse().unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn elementary_expression_substitutes_back(seed in poly(3, 3)) {
        let sym = symmetrize3(&seed);
        let q = express_in_elementaries(&sym, 3).unwrap();
        let e: BTreeMap<usize, MultiPoly> = (0..3).map(|i| (i, elementary(3, i + 1))).collect();
        prop_assert_eq!(q.substitute(&e).unwrap(), sym);
    }

    #[test]
    fn shifts_compose(ai in 0usize..8, m1 in -20i64..20, m2 in -20i64..20) {
        let x = KoModel::new(ALLOWED_RESIDUES[ai]).unwrap();
        let two_step = x.representative_shift(m1).unwrap().representative_shift(m2).unwrap();
        let one_step = x.representative_shift(m1 + m2).unwrap();
        prop_assert_eq!(two_step.a(), one_step.a());
    }

    #[test]
    fn flip_reverses_shift(ai in 0usize..8, m in -20i64..20) {
        let x = KoModel::new(ALLOWED_RESIDUES[ai]).unwrap();
        let lhs = x.representative_shift(m).unwrap().orientation_flip().unwrap();
        let rhs = x.orientation_flip().unwrap().representative_shift(-m).unwrap();
        prop_assert_eq!(lhs.a(), rhs.a());
    }

    #[test]
    fn psi_p_is_multiplicative_and_frobenius(
        pi in 0usize..4,
        negative in any::<bool>(),
        f in prop::collection::vec(0u64..1000, 1..8),
        g in prop::collection::vec(0u64..1000, 1..8),
    ) {
        let p = [3u64, 5, 7, 11][pi];
        let model = KModel::new(p, if negative { -1 } else { 1 }).unwrap();
        let q = model.quotient();
        let series = |c: &[u64]| {
            let mut s = MultiPoly::zero();
            for (i, v) in c.iter().enumerate() {
                s.add_term(Monomial::var_pow(0, i as u32), BigInt::from(*v));
            }
            q.reduce(&s)
        };
        let (f, g) = (series(&f), series(&g));
        let fg = q.mul(&f, &g);
        prop_assert_eq!(model.apply_psi(&fg), q.mul(&model.apply_psi(&f), &model.apply_psi(&g)));
        let frob = &model.apply_psi(&f).lift() - &q.pow(&f, p as u32).lift();
        prop_assert!(frob.all_coefficients_divisible_by(&BigInt::from(p)));
    }

    #[test]
    fn homotopy_equivalence_is_an_equivalence(
        a in prop::sample::select(ALLOWED_RESIDUES.to_vec()),
        b in prop::sample::select(ALLOWED_RESIDUES.to_vec()),
        c in prop::sample::select(ALLOWED_RESIDUES.to_vec()),
        sx in prop::collection::vec(any::<bool>(), 4),
        sy in prop::collection::vec(any::<bool>(), 4),
        sz in prop::collection::vec(any::<bool>(), 4),
    ) {
        let point = |a: i64, s: &[bool]| {
            let signs: BTreeMap<u64, i8> = primes_between(5, 13)
                .into_iter()
                .zip(s)
                .map(|(p, &neg)| (p, if neg { -1 } else { 1 }))
                .collect();
            GenusPoint::canonicalize(a, &signs, 13).unwrap()
        };
        let (x, y, z) = (point(a, &sx), point(b, &sy), point(c, &sz));
        let eq = |u: &GenusPoint, v: &GenusPoint| homotopy_equivalent(u, v).unwrap();
        prop_assert!(eq(&x, &x));
        prop_assert_eq!(eq(&x, &y), eq(&y, &x));
        if eq(&x, &y) && eq(&y, &z) {
            prop_assert!(eq(&x, &z));
        }
        let same_class = (a - b).rem_euclid(24) == 0 || (a + b).rem_euclid(24) == 0;
        prop_assert_eq!(eq(&x, &y), same_class && sx == sy);
    }
}

#[test]
fn k_model_noise_is_invisible_after_truncation() {
    let base = KModel::new(5, 1).unwrap();
    let w = MultiPoly::monomial(Monomial::var_pow(0, 4), BigInt::from(7));
    let x0 = MultiPoly::monomial(Monomial::var_pow(0, 1), BigInt::from(3));
    let noisy = base.clone().with_noise(w, x0).unwrap();
    assert_eq!(noisy.psi_p_generator(), base.psi_p_generator());
}

#[test]
fn eigenvalue_fifteen_breaks_the_ko_table() {
    let cfg = TheoremConfig {
        primes: vec![3],
        ..TheoremConfig::default()
    };
    let honest = theorem_reproduction(&cfg).unwrap();
    assert!(honest.consistent);
    let control = theorem_reproduction(&TheoremConfig { top_eigenvalue: 15, ..cfg }).unwrap();
    assert!(!control.ko_consistent);
    assert_ne!(
        honest.ko_table.iter().map(|r| r.verdict.intertwinable).collect::<Vec<_>>(),
        control.ko_table.iter().map(|r| r.verdict.intertwinable).collect::<Vec<_>>()
    );
}
